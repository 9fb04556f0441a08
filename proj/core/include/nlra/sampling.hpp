#pragma once

#include <cstddef>
#include <functional>

#include "nlra/linalg.hpp"

namespace nlra {

/// Rows per chunk of a Monte Carlo sample stream.
inline constexpr std::size_t kSampleChunkRows = 8192;

/// Number of chunks needed for n samples.
std::size_t sample_chunk_count(std::size_t n);

/// Chunk `index` of the n x d standard normal sample set for `seed`. The full
/// set is the row-wise concatenation of all chunks, so it depends only on
/// (n, d, seed) and not on how the chunks are scheduled.
Matrix sample_chunk(std::size_t n, Index d, RngSeed seed, std::size_t index);

/// The whole n x d sample set in one matrix.
Matrix gaussian_samples(std::size_t n, Index d, RngSeed seed);

}  // namespace nlra
