#pragma once

#include "jointspec/commute.hpp"
#include "jointspec/error.hpp"
#include "jointspec/factor.hpp"
#include "jointspec/io.hpp"
#include "jointspec/matrix_core.hpp"
#include "jointspec/perturb.hpp"
#include "jointspec/poly.hpp"
#include "jointspec/random.hpp"
#include "jointspec/spectra.hpp"
