#pragma once

#include "netiso/assignment.hpp"
#include "netiso/estimators.hpp"
#include "netiso/generators.hpp"
#include "netiso/graph.hpp"
#include "netiso/harness.hpp"
#include "netiso/isolation.hpp"
#include "netiso/outcomes.hpp"
#include "netiso/rng.hpp"
#include "netiso/selection.hpp"
#include "netiso/spectral.hpp"
