#ifndef GRUNSKY_GRUNSKY_HPP
#define GRUNSKY_GRUNSKY_HPP

// Umbrella header for the numerical library (the CLI layer lives in cli.hpp).

#include "grunsky/beltrami.hpp"
#include "grunsky/domain.hpp"
#include "grunsky/errors.hpp"
#include "grunsky/fredholm.hpp"
#include "grunsky/grunsky_operator.hpp"
#include "grunsky/homotopy.hpp"
#include "grunsky/quadrature.hpp"
#include "grunsky/quasidomain.hpp"
#include "grunsky/series.hpp"

#endif // GRUNSKY_GRUNSKY_HPP
