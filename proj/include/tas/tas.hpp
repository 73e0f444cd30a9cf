#pragma once

#include "tas/analytics.hpp"
#include "tas/core.hpp"
#include "tas/estimation/cluster_sizes.hpp"
#include "tas/estimation/contact.hpp"
#include "tas/estimation/fit.hpp"
#include "tas/estimation/mu0.hpp"
#include "tas/experiments.hpp"
#include "tas/io.hpp"
#include "tas/knn.hpp"
#include "tas/optimize.hpp"
#include "tas/random.hpp"
#include "tas/sampling.hpp"
