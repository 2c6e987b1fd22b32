#pragma once

#include "oofdm/channel.hpp"
#include "oofdm/clipnoise.hpp"
#include "oofdm/config.hpp"
#include "oofdm/errors.hpp"
#include "oofdm/frames.hpp"
#include "oofdm/harness.hpp"
#include "oofdm/modem.hpp"
#include "oofdm/modulation.hpp"
#include "oofdm/rng.hpp"
#include "oofdm/transforms.hpp"
