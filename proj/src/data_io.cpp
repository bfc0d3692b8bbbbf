#include "streamfact/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "streamfact/linalg.hpp"

namespace streamfact {

namespace {

void require_binary_mask(const DenseMatrix& M) {
    for (double v : M.entries()) {
        if (v != 0.0 && v != 1.0) {
            throw ContractViolation("mask entries must be exactly 0 or 1");
        }
    }
}

bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !token.empty();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

}  // namespace

MaskedDataset make_dataset(DenseMatrix Y) {
    DenseMatrix ones(Y.rows(), Y.cols());
    std::fill(ones.data(), ones.data() + ones.size(), 1.0);
    return make_dataset(std::move(Y), std::move(ones));
}

MaskedDataset make_dataset(DenseMatrix Y, DenseMatrix M) {
    if (Y.rows() != M.rows() || Y.cols() != M.cols()) {
        throw ContractViolation("make_dataset: Y and M shapes differ");
    }
    require_binary_mask(M);
    MaskedDataset d;
    d.Y = std::move(Y);
    d.M = std::move(M);
    return d;
}

DenseVector column(const DenseMatrix& A, std::size_t j) {
    if (j >= A.cols()) {
        throw ContractViolation("column: index out of range");
    }
    DenseVector v(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) v[i] = A(i, j);
    return v;
}

void set_column(DenseMatrix& A, std::size_t j, const DenseVector& v) {
    if (j >= A.cols() || v.size() != A.rows()) {
        throw ContractViolation("set_column: shape mismatch");
    }
    for (std::size_t i = 0; i < A.rows(); ++i) A(i, j) = v[i];
}

bool column_all_ones(const DenseMatrix& M, std::size_t j) {
    for (std::size_t i = 0; i < M.rows(); ++i) {
        if (M(i, j) != 1.0) return false;
    }
    return true;
}

DenseMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::vector<std::string> names;
    return load_matrix_csv(path, names);
}

DenseMatrix load_matrix_csv(const std::filesystem::path& path, std::vector<std::string>& names) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open CSV file: " + path.string());
    }
    names.clear();

    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;

    while (std::getline(in, line)) {
        ++line_no;
        const auto cells = split_csv_line(line);
        if (cells.size() == 1 && cells[0].empty()) {
            if (in.peek() == EOF) break;  // trailing newline
            throw ParseError("empty CSV line " + std::to_string(line_no), line_no);
        }

        if (!header_checked) {
            header_checked = true;
            bool numeric = true;
            double tmp;
            for (const auto& c : cells) {
                if (!parse_double(c, tmp)) { numeric = false; break; }
            }
            if (!numeric) {
                for (const auto& c : cells) names.emplace_back(c);
                cols = cells.size();
                continue;
            }
            cols = cells.size();
        }

        if (cells.size() != cols) {
            throw ParseError("ragged CSV row at line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(cols) + " cells, got " + std::to_string(cells.size()),
                             line_no);
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v;
            if (!parse_double(cells[c], v)) {
                throw ParseError("non-numeric CSV cell at line " + std::to_string(line_no) +
                                     ", column " + std::to_string(c + 1),
                                 line_no, c + 1);
            }
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) {
        throw ParseError("CSV file has no numeric rows: " + path.string());
    }
    return DenseMatrix(rows, cols, std::move(values));
}

void save_matrix_csv(const std::filesystem::path& path, const DenseMatrix& A) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open for writing: " + path.string());
    }
    char buf[64];
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", A(i, j));
            out << buf;
            if (j + 1 < A.cols()) out << ',';
        }
        out << '\n';
    }
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_pgm_token(const std::string& bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        const char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) {
        throw ParseError("unexpected end of PGM header");
    }
    return bytes.substr(start, pos - start);
}

std::size_t parse_pgm_uint(const std::string& token, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(std::string("malformed PGM ") + what + ": '" + token + "'");
    }
    return value;
}

}  // namespace

DenseMatrix load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open PGM file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();

    std::size_t pos = 0;
    const std::string magic = next_pgm_token(bytes, pos);
    if (magic != "P2" && magic != "P5") {
        throw ParseError("not a PGM file (magic '" + magic + "')");
    }
    const std::size_t width = parse_pgm_uint(next_pgm_token(bytes, pos), "width");
    const std::size_t height = parse_pgm_uint(next_pgm_token(bytes, pos), "height");
    const std::size_t maxval = parse_pgm_uint(next_pgm_token(bytes, pos), "maxval");
    if (width == 0 || height == 0) {
        throw ParseError("PGM has zero dimension");
    }
    if (maxval == 0 || maxval > 65535) {
        throw ParseError("PGM maxval out of range: " + std::to_string(maxval));
    }

    DenseMatrix img(height, width);
    const double scale = 1.0 / static_cast<double>(maxval);
    const std::size_t count = width * height;

    if (magic == "P2") {
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t v = parse_pgm_uint(next_pgm_token(bytes, pos), "pixel");
            if (v > maxval) {
                throw ParseError("PGM pixel exceeds maxval");
            }
            img(k / width, k % width) = static_cast<double>(v) * scale;
        }
    } else {
        // single whitespace byte separates the header from the raster
        if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            throw ParseError("malformed P5 header");
        }
        ++pos;
        const std::size_t bytes_per_pixel = maxval < 256 ? 1 : 2;
        if (bytes.size() - pos < count * bytes_per_pixel) {
            throw ParseError("P5 raster truncated");
        }
        for (std::size_t k = 0; k < count; ++k) {
            std::size_t v;
            if (bytes_per_pixel == 1) {
                v = static_cast<unsigned char>(bytes[pos + k]);
            } else {
                v = (static_cast<std::size_t>(static_cast<unsigned char>(bytes[pos + 2 * k])) << 8) |
                    static_cast<unsigned char>(bytes[pos + 2 * k + 1]);
            }
            if (v > maxval) {
                throw ParseError("PGM pixel exceeds maxval");
            }
            img(k / width, k % width) = static_cast<double>(v) * scale;
        }
    }
    return img;
}

void save_pgm(const std::filesystem::path& path, const DenseMatrix& image,
              double min_value, double max_value) {
    if (!(max_value > min_value)) {
        throw ContractViolation("save_pgm: max_value must exceed min_value");
    }
    if (image.rows() == 0 || image.cols() == 0) {
        throw ContractViolation("save_pgm: empty image");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open for writing: " + path.string());
    }
    out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
    const double span = max_value - min_value;
    for (std::size_t i = 0; i < image.rows(); ++i) {
        for (std::size_t j = 0; j < image.cols(); ++j) {
            const double clamped = std::clamp(image(i, j), min_value, max_value);
            const int q = static_cast<int>(std::lround((clamped - min_value) / span * 255.0));
            out.put(static_cast<char>(static_cast<unsigned char>(q)));
        }
    }
}

DenseMatrix vectorise_images(const std::vector<DenseMatrix>& images) {
    if (images.empty()) return DenseMatrix();
    const std::size_t h = images[0].rows();
    const std::size_t w = images[0].cols();
    DenseMatrix out(h * w, images.size());
    for (std::size_t j = 0; j < images.size(); ++j) {
        if (images[j].rows() != h || images[j].cols() != w) {
            throw ContractViolation("vectorise_images: shape mismatch at image " + std::to_string(j));
        }
        const DenseVector v = vec(images[j]);
        set_column(out, j, v);
    }
    return out;
}

std::vector<DenseMatrix> devectorise_images(const DenseMatrix& columns,
                                            std::size_t height, std::size_t width) {
    if (columns.rows() != height * width) {
        throw ContractViolation("devectorise_images: m != height*width");
    }
    std::vector<DenseMatrix> images;
    images.reserve(columns.cols());
    for (std::size_t j = 0; j < columns.cols(); ++j) {
        images.push_back(unvec(column(columns, j), height, width));
    }
    return images;
}

DenseMatrix make_block_mask(std::size_t m, std::size_t n, double fraction,
                            std::size_t block_len, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw ContractViolation("make_block_mask: fraction must be in [0,1]");
    }
    DenseMatrix M(m, n);
    std::fill(M.data(), M.data() + M.size(), 1.0);
    if (fraction <= 0.0 || m == 0) return M;
    if (fraction >= 1.0) {
        std::fill(M.data(), M.data() + M.size(), 0.0);
        return M;
    }

    std::size_t len = block_len == 0 ? (m + 3) / 4 : block_len;
    len = std::min(len, m);
    len = std::max<std::size_t>(len, 1);
    const auto target = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(m)));

    std::mt19937_64 engine(seed);
    std::uniform_int_distribution<std::size_t> start_dist(0, m - len);
    const std::size_t attempt_cap = 64 * std::max<std::size_t>(1, m / len) + 1000;

    for (std::size_t j = 0; j < n; ++j) {
        std::size_t zeros = 0;
        std::size_t attempts = 0;
        while (zeros < target && attempts < attempt_cap) {
            const std::size_t start = start_dist(engine);
            for (std::size_t i = start; i < start + len; ++i) {
                if (M(i, j) == 1.0) {
                    M(i, j) = 0.0;
                    ++zeros;
                }
            }
            ++attempts;
        }
        // pathological overlap case: finish deterministically
        for (std::size_t i = 0; i < m && zeros < target; ++i) {
            if (M(i, j) == 1.0) {
                M(i, j) = 0.0;
                ++zeros;
            }
        }
    }
    return M;
}

DenseMatrix make_bernoulli_mask(std::size_t m, std::size_t n, double fraction,
                                std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw ContractViolation("make_bernoulli_mask: fraction must be in [0,1]");
    }
    DenseMatrix M(m, n);
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            M(i, j) = u(engine) < fraction ? 0.0 : 1.0;
        }
    }
    return M;
}

SamplerState SamplerState::make(Mode mode, std::uint64_t seed) {
    SamplerState s;
    s.mode = mode;
    s.engine.seed(seed);
    return s;
}

std::pair<std::size_t, SamplerState> next_index(SamplerState state, std::size_t n) {
    if (n == 0) {
        throw ContractViolation("next_index: n must be at least 1");
    }
    if (state.mode == SamplerState::Mode::WithReplacement) {
        std::uniform_int_distribution<std::size_t> dist(0, n - 1);
        const std::size_t idx = dist(state.engine);
        return {idx, std::move(state)};
    }
    if (state.permutation.size() != n || state.position >= n) {
        state.permutation.resize(n);
        for (std::size_t i = 0; i < n; ++i) state.permutation[i] = i;
        std::shuffle(state.permutation.begin(), state.permutation.end(), state.engine);
        state.position = 0;
    }
    const std::size_t idx = state.permutation[state.position++];
    return {idx, std::move(state)};
}

DenseMatrix synthetic_lowrank(std::size_t m, std::size_t n, std::size_t true_rank,
                              std::uint64_t seed) {
    if (m == 0 || n == 0 || true_rank == 0 || true_rank > std::min(m, n)) {
        throw ContractViolation("synthetic_lowrank: need 1 <= true_rank <= min(m,n)");
    }
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Smooth nonnegative dictionary columns: |moving-average of white noise|,
    // normalised so each column has 2-norm sqrt(m).
    DenseMatrix dict(m, true_rank);
    const std::size_t half_window = std::max<std::size_t>(1, m / 16);
    std::vector<double> raw(m), smooth(m);
    for (std::size_t j = 0; j < true_rank; ++j) {
        for (std::size_t i = 0; i < m; ++i) raw[i] = gauss(engine);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t lo = i >= half_window ? i - half_window : 0;
                const std::size_t hi = std::min(m - 1, i + half_window);
                double s = 0.0;
                for (std::size_t k = lo; k <= hi; ++k) s += raw[k];
                smooth[i] = s / static_cast<double>(hi - lo + 1);
            }
            raw = smooth;
        }
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            smooth[i] = std::fabs(raw[i]);
            norm_sq += smooth[i] * smooth[i];
        }
        const double scale = norm_sq > 0.0 ? std::sqrt(static_cast<double>(m) / norm_sq) : 1.0;
        for (std::size_t i = 0; i < m; ++i) dict(i, j) = smooth[i] * scale;
    }

    DenseMatrix coeff(true_rank, n);
    const double coeff_scale = 1.0 / std::sqrt(static_cast<double>(true_rank));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < true_rank; ++k) {
            coeff(k, j) = std::fabs(gauss(engine)) * coeff_scale;
        }
    }
    return matmul(dict, coeff);
}

}  // namespace streamfact
