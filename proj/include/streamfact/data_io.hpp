#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "streamfact/dense.hpp"

namespace streamfact {

// A data matrix Y (columns are items) together with a binary observation
// mask M of the same shape. An all-ones mask means fully observed.
struct MaskedDataset {
    DenseMatrix Y;
    DenseMatrix M;
    std::vector<std::string> names;  // optional per-column labels

    std::size_t dim() const noexcept { return Y.rows(); }
    std::size_t count() const noexcept { return Y.cols(); }
};

// Builds a dataset; the one-argument form attaches an all-ones mask.
// Validates shape agreement and that M is binary.
MaskedDataset make_dataset(DenseMatrix Y);
MaskedDataset make_dataset(DenseMatrix Y, DenseMatrix M);

// Column extraction helpers shared by the model and the runners.
DenseVector column(const DenseMatrix& A, std::size_t j);
void set_column(DenseMatrix& A, std::size_t j, const DenseVector& v);
bool column_all_ones(const DenseMatrix& M, std::size_t j);

// Numeric CSV, comma delimited, '.' decimal separator. A non-numeric first
// row is treated as a header and returned through `names` when requested.
// Ragged rows and non-numeric cells raise ParseError with 1-based location.
DenseMatrix load_matrix_csv(const std::filesystem::path& path);
DenseMatrix load_matrix_csv(const std::filesystem::path& path, std::vector<std::string>& names);

// Writes rows as comma-delimited lines at 17 significant digits, which makes
// a save/load round trip bit-exact.
void save_matrix_csv(const std::filesystem::path& path, const DenseMatrix& A);

// PGM (P2 ASCII or P5 binary, maxval <= 65535). Pixels scale to [0,1].
DenseMatrix load_pgm(const std::filesystem::path& path);

// Clamps entries to [min_value, max_value] and quantises linearly to
// 8-bit P5 output.
void save_pgm(const std::filesystem::path& path, const DenseMatrix& image,
              double min_value, double max_value);

// Column-major vectorisation of an image stack: output column j is
// vec(images[j]); m = height*width. All images must share one shape.
DenseMatrix vectorise_images(const std::vector<DenseMatrix>& images);
std::vector<DenseMatrix> devectorise_images(const DenseMatrix& columns,
                                            std::size_t height, std::size_t width);

// Per column, zeroes contiguous runs of length block_len at random positions
// until the removed fraction reaches `fraction` (within one block).
// block_len == 0 selects the default of one contiguous quarter of the column.
DenseMatrix make_block_mask(std::size_t m, std::size_t n, double fraction,
                            std::size_t block_len, std::uint64_t seed);

// Independent per-entry removal with probability `fraction`.
DenseMatrix make_bernoulli_mask(std::size_t m, std::size_t n, double fraction,
                                std::uint64_t seed);

// Column sampling, value semantics: next_index consumes a state and returns
// the drawn index with the advanced state.
struct SamplerState {
    enum class Mode { WithReplacement, EpochShuffle };

    Mode mode = Mode::WithReplacement;
    std::mt19937_64 engine;
    std::vector<std::size_t> permutation;
    std::size_t position = 0;

    static SamplerState make(Mode mode, std::uint64_t seed);
};

std::pair<std::size_t, SamplerState> next_index(SamplerState state, std::size_t n);

// Smooth nonnegative low-rank matrix (entrywise |smoothed noise| dictionary
// times |noise| coefficients); rank is exactly true_rank for generic seeds.
// Stands in for image data when no dataset is supplied.
DenseMatrix synthetic_lowrank(std::size_t m, std::size_t n, std::size_t true_rank,
                              std::uint64_t seed);

}  // namespace streamfact
