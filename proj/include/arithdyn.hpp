#ifndef ARITHDYN_HPP
#define ARITHDYN_HPP

#include "arithdyn/errors.hpp"
#include "arithdyn/algebra.hpp"
#include "arithdyn/morphisms.hpp"
#include "arithdyn/sequence.hpp"
#include "arithdyn/heights.hpp"
#include "arithdyn/orbits.hpp"
#include "arithdyn/averaging.hpp"
#include "arithdyn/sphere.hpp"
#include "arithdyn/lift.hpp"
#include "arithdyn/green.hpp"
#include "arithdyn/roots.hpp"
#include "arithdyn/equidist.hpp"

#endif  // ARITHDYN_HPP
