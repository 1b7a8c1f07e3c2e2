#ifndef MEMEKIT_MEMEKIT_HPP
#define MEMEKIT_MEMEKIT_HPP

#include "memekit/attacks.hpp"
#include "memekit/augment.hpp"
#include "memekit/codec.hpp"
#include "memekit/config.hpp"
#include "memekit/errors.hpp"
#include "memekit/evalkit.hpp"
#include "memekit/font5.hpp"
#include "memekit/image.hpp"
#include "memekit/pipeline.hpp"
#include "memekit/regions.hpp"
#include "memekit/rng.hpp"
#include "memekit/simloss.hpp"

#endif  // MEMEKIT_MEMEKIT_HPP
