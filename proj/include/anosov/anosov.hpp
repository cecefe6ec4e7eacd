#pragma once

#include "anosov/blocks.hpp"
#include "anosov/certify.hpp"
#include "anosov/configs.hpp"
#include "anosov/domain.hpp"
#include "anosov/error.hpp"
#include "anosov/linalg.hpp"
#include "anosov/lp.hpp"
#include "anosov/polytope.hpp"
#include "anosov/spectra.hpp"
#include "anosov/theta_set.hpp"
#include "anosov/words.hpp"
