#pragma once

#include "polyclust/error.hpp"
#include "polyclust/polynomial.hpp"
#include "polyclust/rootfind.hpp"
#include "polyclust/counting.hpp"
#include "polyclust/bounds.hpp"
#include "polyclust/rng.hpp"
#include "polyclust/samplers.hpp"
#include "polyclust/experiments.hpp"
#include "polyclust/io.hpp"
#include "polyclust/report.hpp"
#include "polyclust/selftest.hpp"
