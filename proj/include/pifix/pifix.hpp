#pragma once
// pifix.hpp - umbrella header.

#include "pifix/error.hpp"
#include "pifix/numerics.hpp"
#include "pifix/rational.hpp"
#include "pifix/series.hpp"
#include "pifix/iterator.hpp"
#include "pifix/verify.hpp"
#include "pifix/report.hpp"
