#include "lvequiv/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "lvequiv/errors.hpp"

namespace lvequiv {

namespace {

double condition_number(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 1.0;
    Eigen::VectorXd s = singular_values(m);
    double lo = s(s.size() - 1);
    return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd i_minus_b(const WeightedModel& m) {
    return Eigen::MatrixXd::Identity(m.weights.rows(), m.weights.cols()) - m.weights;
}

constexpr double kSingularCondition = 1e12;

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

WeightedModel weighted_model(const Digraph& g, Eigen::MatrixXd weights) {
    int n = g.size();
    if (weights.rows() != n || weights.cols() != n) throw PreconditionError("weight matrix must be |V| x |V|");
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (weights(j, i) != 0.0 && !g.has_edge(i, j))
                throw PreconditionError("weight on " + g.label(i) + " -> " + g.label(j) + " but the edge is absent");
    WeightedModel m{g, std::move(weights), 1.0};
    m.condition = condition_number(i_minus_b(m));
    if (!(m.condition < kSingularCondition))
        throw DegenerateModel("I - B is numerically singular (condition " + std::to_string(m.condition) + ")");
    return m;
}

WeightedModel sample_weights(const Digraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.5, 2.5);
    std::bernoulli_distribution sign(0.5);
    int n = g.size();
    for (int attempt = 0; attempt < 100; ++attempt) {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
        for (const auto& e : g.edges()) {
            double w = mag(rng);
            b(e.head, e.tail) = sign(rng) ? w : -w;
        }
        try {
            return weighted_model(g, std::move(b));
        } catch (const DegenerateModel&) {
        }
    }
    throw DegenerateModel("I - B stayed singular over 100 weight draws");
}

MixingMatrix mixing(const WeightedModel& m) {
    int n = m.graph.size();
    Eigen::MatrixXd full = i_minus_b(m);
    double cond = condition_number(full);
    if (!(cond < kSingularCondition)) throw DegenerateModel("I - B is numerically singular (condition " + std::to_string(cond) + ")");
    Eigen::MatrixXd inv = full.fullPivLu().solve(Eigen::MatrixXd::Identity(n, n));
    MixingMatrix a;
    std::vector<int> obs = bits_of(m.graph.observed());
    a.values.resize(static_cast<Eigen::Index>(obs.size()), n);
    for (size_t r = 0; r < obs.size(); ++r) a.values.row(static_cast<Eigen::Index>(r)) = inv.row(obs[r]);
    a.row_labels = m.graph.labels_of(m.graph.observed());
    a.column_labels = m.graph.labels();
    return a;
}

Scrambling random_scrambling(int columns, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Scrambling s;
    s.perm.resize(columns);
    std::iota(s.perm.begin(), s.perm.end(), 0);
    std::shuffle(s.perm.begin(), s.perm.end(), rng);
    std::uniform_real_distribution<double> log_mag(std::log(0.2), std::log(5.0));
    std::bernoulli_distribution sign(0.5);
    for (int k = 0; k < columns; ++k) {
        double v = std::exp(log_mag(rng));
        s.scales.push_back(sign(rng) ? v : -v);
    }
    return s;
}

MixingMatrix scramble(const MixingMatrix& a, const Scrambling& s) {
    if (static_cast<int>(s.perm.size()) != a.cols() || s.scales.size() != s.perm.size())
        throw PreconditionError("scrambling does not match the column count");
    std::vector<int> seen(a.cols(), 0);
    for (int p : s.perm) {
        if (p < 0 || p >= a.cols() || seen[p]++) throw PreconditionError("scrambling is not a permutation");
    }
    MixingMatrix out;
    out.values.resize(a.values.rows(), a.values.cols());
    for (int k = 0; k < a.cols(); ++k) {
        if (s.scales[k] == 0.0) throw PreconditionError("scales must be nonzero");
        out.values.col(s.perm[k]) = a.values.col(k) * s.scales[k];
    }
    out.row_labels = a.row_labels;
    bool identity = std::all_of(s.scales.begin(), s.scales.end(), [](double v) { return v == 1.0; });
    for (int k = 0; k < a.cols(); ++k) identity = identity && s.perm[k] == k;
    if (identity) out.column_labels = a.column_labels;
    return out;
}

MixingMatrix scramble(const MixingMatrix& a, std::uint64_t seed) { return scramble(a, random_scrambling(a.cols(), seed)); }

Eigen::VectorXd singular_values(const Eigen::MatrixXd& block) {
    if (block.size() == 0) return Eigen::VectorXd();
    return Eigen::JacobiSVD<Eigen::MatrixXd>(block).singularValues();
}

int numeric_rank(const Eigen::MatrixXd& block, double tol) {
    Eigen::VectorXd s = singular_values(block);
    if (s.size() == 0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * s(0) && s(k) > kAbsoluteRankFloor) ++r;
    return r;
}

double confidence_from_sigma(double sigma_min, const ConfidenceParams& p) {
    return 1.0 / (1.0 + std::exp(-p.alpha * (sigma_min - p.eps)));
}

double fullrank_confidence(const Eigen::MatrixXd& block, const ConfidenceParams& p) {
    Eigen::VectorXd s = singular_values(block);
    return confidence_from_sigma(s.size() == 0 ? 0.0 : s(s.size() - 1), p);
}

Eigen::MatrixXd sample_data(const WeightedModel& m, int n, std::uint64_t seed) {
    if (n < 0) throw PreconditionError("sample count must be nonnegative");
    MixingMatrix a = mixing(m);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Eigen::MatrixXd e(m.graph.size(), n);
    for (int s = 0; s < n; ++s)
        for (int v = 0; v < m.graph.size(); ++v) e(v, s) = u(rng);
    return (a.values * e).transpose();
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, VertexSet rows, VertexSet cols) {
    std::vector<int> r = bits_of(rows), c = bits_of(cols);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = 0; j < c.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(r[i], c[j]);
    return out;
}

std::string write_mixing_csv(const MixingMatrix& a) {
    std::string out;
    if (a.column_labels) {
        for (const auto& l : *a.column_labels) out += "," + l;
    } else {
        out += "anon";
    }
    out += "\n";
    char buf[64];
    for (int r = 0; r < a.rows(); ++r) {
        out += a.row_labels.at(r);
        for (int c = 0; c < a.cols(); ++c) {
            std::snprintf(buf, sizeof buf, ",%.17g", a.values(r, c));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

MixingMatrix parse_mixing_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    MixingMatrix a;
    std::vector<std::vector<double>> rows;
    int width = -1;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto cells = split_csv(line);
        if (!header) {
            header = true;
            if (cells.size() == 1 && cells[0] == "anon") continue;
            if (cells.empty() || !cells[0].empty()) throw ParseError("header must be \"anon\" or start with an empty cell", line_no, 1);
            a.column_labels = std::vector<std::string>(cells.begin() + 1, cells.end());
            width = static_cast<int>(cells.size()) - 1;
            continue;
        }
        if (cells.size() < 2) throw ParseError("row needs a label and at least one value", line_no, 1);
        if (width < 0) width = static_cast<int>(cells.size()) - 1;
        if (static_cast<int>(cells.size()) - 1 != width)
            throw ParseError("expected " + std::to_string(width) + " values", line_no, 1);
        a.row_labels.push_back(cells[0]);
        std::vector<double> vals;
        int col = static_cast<int>(cells[0].size()) + 2;
        for (size_t k = 1; k < cells.size(); ++k) {
            const std::string& c = cells[k];
            char* end = nullptr;
            double v = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size() || !std::isfinite(v))
                throw ParseError("not a finite number: \"" + c + "\"", line_no, col);
            vals.push_back(v);
            col += static_cast<int>(c.size()) + 1;
        }
        rows.push_back(std::move(vals));
    }
    if (!header) throw ParseError("empty mixing file", 0, 0);
    a.values.resize(static_cast<Eigen::Index>(rows.size()), std::max(width, 0));
    for (size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < width; ++c) a.values(static_cast<Eigen::Index>(r), c) = rows[r][c];
    return a;
}

MixingMatrix load_mixing_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_mixing_csv(ss.str());
}

void save_mixing_csv(const MixingMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << write_mixing_csv(a);
}

}  // namespace lvequiv
