#pragma once

// Umbrella include for the whole toolkit.

#include "sss/int128.hpp"
#include "sss/rng.hpp"
#include "sss/index_set.hpp"
#include "sss/instance.hpp"
#include "sss/meter.hpp"
#include "sss/numerics.hpp"
#include "sss/sumset.hpp"
#include "sss/mixer.hpp"
#include "sss/ov.hpp"
#include "sss/lists.hpp"
#include "sss/p4.hpp"
#include "sss/solver.hpp"
#include "sss/gen.hpp"
#include "sss/experiment.hpp"
