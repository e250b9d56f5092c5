#pragma once

#include "bcsgap/errors.hpp"
#include "bcsgap/extrapolate.hpp"
#include "bcsgap/gap.hpp"
#include "bcsgap/io.hpp"
#include "bcsgap/kernels.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/params.hpp"
#include "bcsgap/quad.hpp"
#include "bcsgap/special.hpp"
#include "bcsgap/thermo.hpp"
#include "bcsgap/transition.hpp"
#include "bcsgap/verify.hpp"
