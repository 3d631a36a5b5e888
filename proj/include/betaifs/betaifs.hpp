#pragma once

// Umbrella header.

#include "betaifs/algebraic.hpp"
#include "betaifs/beta_poly.hpp"
#include "betaifs/cert_json.hpp"
#include "betaifs/cfrac.hpp"
#include "betaifs/epsilon.hpp"
#include "betaifs/garsia.hpp"
#include "betaifs/ifs.hpp"
#include "betaifs/interval.hpp"
#include "betaifs/magnitude.hpp"
#include "betaifs/numeric.hpp"
#include "betaifs/poly.hpp"
#include "betaifs/synthesis.hpp"
