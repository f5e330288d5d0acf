#pragma once

// Umbrella header for the full toolkit.

#include "reident/attack.hpp"
#include "reident/evaluate.hpp"
#include "reident/experiment.hpp"
#include "reident/generate.hpp"
#include "reident/graph.hpp"
#include "reident/mapping.hpp"
#include "reident/perturb.hpp"
#include "reident/rng.hpp"
#include "reident/seeding.hpp"
#include "reident/similarity.hpp"
