#pragma once

// Umbrella header: arithmetic Okounkov bodies, Chebyshev transforms, and
// chi-volume invariants for adelically metrized toric line bundles over Q.

#include "arch_metric.hpp"
#include "bundle.hpp"
#include "chebyshev.hpp"
#include "checks.hpp"
#include "chi.hpp"
#include "config.hpp"
#include "exponent.hpp"
#include "field_params.hpp"
#include "fit.hpp"
#include "lifted_body.hpp"
#include "nonarch.hpp"
#include "polytope.hpp"
#include "quadrature.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "section.hpp"
#include "semigroup.hpp"
#include "toric_series.hpp"
