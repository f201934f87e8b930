#pragma once

// Umbrella header for the structure-aware glyph watermarking library.

#include "glyphmark/image.hpp"
#include "glyphmark/png_io.hpp"
#include "glyphmark/params.hpp"
#include "glyphmark/rng.hpp"
#include "glyphmark/skeleton.hpp"
#include "glyphmark/keypoints.hpp"
#include "glyphmark/mpe.hpp"
#include "glyphmark/tpe.hpp"
#include "glyphmark/mdm.hpp"
#include "glyphmark/encoder.hpp"
#include "glyphmark/channel.hpp"
#include "glyphmark/quality.hpp"
#include "glyphmark/prf.hpp"
#include "glyphmark/codec.hpp"
#include "glyphmark/harness.hpp"
