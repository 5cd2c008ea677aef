#include "lapfit/io.hpp"

#include "lapfit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace lapfit {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void atomic_write_text(const fs::path& path, const std::string& contents) {
    atomic_write_binary(path, contents);
}

void atomic_write_binary(const fs::path& path, const std::string& contents) {
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("rename to " + path.string() + " failed: " + ec.message());
    }
}

EdgeListFile read_edge_list(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    int declared_n = -1;
    std::vector<Edge> edges;
    std::vector<int> loops;
    std::vector<double> edge_weights;
    std::vector<double> loop_weights;
    int weighted_edges = 0;
    int weighted_loops = 0;
    int max_index = -1;

    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        std::istringstream fields(line);
        std::string first;
        fields >> first;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (first == "n") {
            int count = 0;
            if (!(fields >> count) || count < 1) throw IoError("bad vertex count at " + where);
            declared_n = count;
        } else if (first == "loop") {
            int k = 0;
            if (!(fields >> k)) throw IoError("bad loop line at " + where);
            double w = 0.0;
            if (fields >> w) {
                loop_weights.push_back(w);
                ++weighted_loops;
            }
            loops.push_back(k);
            max_index = std::max(max_index, k);
        } else {
            int s = 0;
            int t = 0;
            try {
                s = std::stoi(first);
            } catch (const std::exception&) {
                throw IoError("unrecognized record at " + where);
            }
            if (!(fields >> t)) throw IoError("bad edge line at " + where);
            double w = 0.0;
            if (fields >> w) {
                edge_weights.push_back(w);
                ++weighted_edges;
            }
            edges.emplace_back(s, t);
            max_index = std::max(max_index, std::max(s, t));
        }
    }

    if (weighted_edges != 0 && weighted_edges != static_cast<int>(edges.size()))
        throw IoError("mixed weighted and unweighted edge lines in " + path.string());
    if (weighted_loops != 0 && weighted_loops != static_cast<int>(loops.size()))
        throw IoError("mixed weighted and unweighted loop lines in " + path.string());

    const int n = (declared_n > 0) ? declared_n : max_index + 1;
    if (n < 1) throw IoError("no vertices in " + path.string());

    // The topology constructor canonicalizes and sorts edges; remap the
    // weights accordingly so weight j still belongs to edge j.
    GraphTopology topology(n, edges, loops);
    std::optional<Eigen::VectorXd> weights;
    if (weighted_edges > 0) {
        Eigen::VectorXd u(topology.num_edges());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            Edge canonical{std::min(edges[i].first, edges[i].second),
                           std::max(edges[i].first, edges[i].second)};
            const auto& sorted = topology.edges();
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), canonical);
            u[static_cast<Eigen::Index>(it - sorted.begin())] = edge_weights[i];
        }
        weights = std::move(u);
    }
    std::optional<Eigen::VectorXd> vloop;
    if (weighted_loops > 0) {
        // Loops were sorted by the constructor as well.
        std::vector<std::pair<int, double>> pairs;
        pairs.reserve(loops.size());
        for (std::size_t i = 0; i < loops.size(); ++i) pairs.emplace_back(loops[i], loop_weights[i]);
        std::sort(pairs.begin(), pairs.end());
        Eigen::VectorXd v(static_cast<Eigen::Index>(pairs.size()));
        for (std::size_t i = 0; i < pairs.size(); ++i) v[static_cast<Eigen::Index>(i)] = pairs[i].second;
        vloop = std::move(v);
    }
    return EdgeListFile{std::move(topology), std::move(weights), std::move(vloop)};
}

void write_edge_list(const fs::path& path, const GraphTopology& topology,
                     const std::optional<Eigen::VectorXd>& weights,
                     const std::optional<Eigen::VectorXd>& loop_weights) {
    if (weights && weights->size() != topology.num_edges())
        throw DimensionMismatch("weight vector length does not match edge count");
    std::ostringstream out;
    out << "n " << topology.num_vertices() << "\n";
    for (int j = 0; j < topology.num_edges(); ++j) {
        const auto& [s, t] = topology.edge(j);
        out << s << " " << t;
        if (weights) out << " " << format_double((*weights)[j]);
        out << "\n";
    }
    for (std::size_t k = 0; k < topology.self_loops().size(); ++k) {
        out << "loop " << topology.self_loops()[k];
        if (loop_weights) out << " " << format_double((*loop_weights)[static_cast<Eigen::Index>(k)]);
        out << "\n";
    }
    atomic_write_text(path, out.str());
}

SampleSet read_samples_csv(const fs::path& path) {
    const Eigen::MatrixXd rows = read_matrix_csv(path);
    return SampleSet(rows.transpose());
}

void write_samples_csv(const fs::path& path, const SampleSet& samples) {
    write_matrix_csv(path, samples.matrix().transpose());
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::vector<std::vector<double>> rows;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        std::vector<double> row;
        std::string cell;
        std::istringstream cells(line);
        while (std::getline(cells, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("bad number '" + cell + "' at " + path.string() + ":" +
                              std::to_string(line_no));
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged CSV row at " + path.string() + ":" + std::to_string(line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty CSV file " + path.string());
    Eigen::MatrixXd mat(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return mat;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& mat) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        for (Eigen::Index j = 0; j < mat.cols(); ++j) {
            if (j > 0) out << ",";
            out << format_double(mat(i, j));
        }
        out << "\n";
    }
    atomic_write_text(path, out.str());
}

ImageGrid read_pgm(const fs::path& path) {
    const std::string data = read_file(path);
    std::size_t pos = 0;

    const auto next_token = [&]() -> std::string {
        while (pos < data.size()) {
            const char c = data[pos];
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
        const std::size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        if (start == pos) throw MalformedHeader("truncated PGM header in " + path.string());
        return data.substr(start, pos - start);
    };

    const std::string magic = next_token();
    if (magic != "P5")
        throw MalformedHeader("unsupported PGM magic '" + magic + "' in " + path.string() +
                              " (only binary P5 is supported)");
    int width = 0;
    int height = 0;
    long maxval = 0;
    try {
        width = std::stoi(next_token());
        height = std::stoi(next_token());
        maxval = std::stol(next_token());
    } catch (const MalformedHeader&) {
        throw;
    } catch (const std::exception&) {
        throw MalformedHeader("non-numeric PGM header field in " + path.string());
    }
    if (width < 1 || height < 1) throw MalformedHeader("bad PGM dimensions in " + path.string());
    if (maxval < 1 || maxval > 255)
        throw MalformedHeader("PGM maxval " + std::to_string(maxval) + " unsupported in " +
                              path.string() + " (must be <= 255)");
    if (pos >= data.size()) throw TruncatedData("missing pixel data in " + path.string());
    ++pos; // single whitespace byte after maxval

    const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (data.size() - pos < expected)
        throw TruncatedData("PGM pixel data short by " +
                            std::to_string(expected - (data.size() - pos)) + " bytes in " +
                            path.string());
    std::vector<double> pixels(expected);
    for (std::size_t i = 0; i < expected; ++i)
        pixels[i] = static_cast<double>(static_cast<unsigned char>(data[pos + i]));
    return ImageGrid(width, height, std::move(pixels));
}

void write_pgm(const fs::path& path, const ImageGrid& image) {
    std::string out;
    out += "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) +
           "\n255\n";
    out.reserve(out.size() + image.pixels().size());
    for (double p : image.pixels()) {
        const double clipped = std::clamp(p, 0.0, 255.0);
        out += static_cast<char>(static_cast<unsigned char>(std::lround(clipped)));
    }
    atomic_write_binary(path, out);
}

} // namespace lapfit
