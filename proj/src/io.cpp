#include "loem/io.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace loem {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    assert(res.ec == std::errc());
    return std::string(buf, res.ptr);
}

namespace {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

// Reads tokenized lines, dropping comments and blank lines.
std::vector<Line> tokenize(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        Line line{number, {}};
        std::string tok;
        while (ls >> tok) line.tokens.push_back(std::move(tok));
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

bool is_rational_token(const std::string& tok) {
    std::size_t p = 0;
    if (p < tok.size() && (tok[p] == '+' || tok[p] == '-')) ++p;
    std::size_t digits = 0;
    while (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) ++p, ++digits;
    if (digits == 0) return false;
    if (p == tok.size()) return true;
    if (tok[p] != '/') return false;
    ++p;
    digits = 0;
    while (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) ++p, ++digits;
    return digits > 0 && p == tok.size();
}

Rational parse_rational(const std::string& tok, int line) {
    auto slash = tok.find('/');
    try {
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(tok));
        boost::multiprecision::cpp_int num(tok.substr(0, slash));
        boost::multiprecision::cpp_int den(tok.substr(slash + 1));
        if (den == 0) throw ParseError(line, "zero denominator in '" + tok + "'");
        return Rational(num, den);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(line, "bad rational '" + tok + "'");
    }
}

double parse_double(const std::string& tok, int line) {
    double value = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(value))
        throw ParseError(line, "bad number '" + tok + "'");
    return value;
}

int parse_count(const std::string& tok, int line) {
    int value = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || value < 1)
        throw ParseError(line, "bad point count '" + tok + "'");
    return value;
}

}  // namespace

RawMatrix parse_space_document(std::istream& in) {
    std::vector<Line> lines = tokenize(in);
    std::size_t at = 0;
    auto need = [&](const char* what) -> const Line& {
        if (at >= lines.size()) {
            int last = lines.empty() ? 0 : lines.back().number;
            throw ParseError(last, std::string("unexpected end of document, expected ") + what);
        }
        return lines[at++];
    };

    const Line& header = need("'points <n>'");
    if (header.tokens.size() != 2 || header.tokens[0] != "points")
        throw ParseError(header.number, "expected 'points <n>'");
    const int n = parse_count(header.tokens[1], header.number);

    const Line& labels = need("'labels ...'");
    if (labels.tokens.empty() || labels.tokens[0] != "labels" ||
        labels.tokens.size() != static_cast<std::size_t>(n) + 1)
        throw ParseError(labels.number,
                         "expected 'labels' with " + std::to_string(n) + " entries");

    RawMatrix m;
    m.n = n;
    m.labels.assign(labels.tokens.begin() + 1, labels.tokens.end());

    std::vector<std::string> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    std::vector<int> cell_lines;
    for (int r = 0; r < n; ++r) {
        const Line& row = need("a matrix row");
        if (row.tokens.size() != static_cast<std::size_t>(n))
            throw ParseError(row.number, "expected " + std::to_string(n) + " entries, got " +
                                             std::to_string(row.tokens.size()));
        for (const std::string& tok : row.tokens) {
            cells.push_back(tok);
            cell_lines.push_back(row.number);
        }
    }
    if (at != lines.size())
        throw ParseError(lines[at].number, "unexpected content after the matrix");

    bool exact = true;
    for (const std::string& tok : cells)
        if (!is_rational_token(tok)) {
            exact = false;
            break;
        }

    m.values.reserve(cells.size());
    if (exact) m.exact.emplace();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (exact) {
            Rational r = parse_rational(cells[c], cell_lines[c]);
            m.values.push_back(static_cast<double>(r));
            m.exact->push_back(std::move(r));
        } else if (is_rational_token(cells[c])) {
            m.values.push_back(static_cast<double>(parse_rational(cells[c], cell_lines[c])));
        } else {
            m.values.push_back(parse_double(cells[c], cell_lines[c]));
        }
    }
    return m;
}

RawMatrix read_space_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_space_document(in);
}

void write_space_document(std::ostream& out, const FiniteMetricSpace& space) {
    const int n = space.size();
    for (const std::string& label : space.labels()) {
        if (label.empty()) throw Error("empty label cannot be written");
        for (char ch : label)
            if (std::isspace(static_cast<unsigned char>(ch)) || ch == '#')
                throw Error("label '" + label + "' cannot be written");
    }
    out << "points " << n << "\n";
    out << "labels";
    for (const std::string& label : space.labels()) out << ' ' << label;
    out << "\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ' ';
            if (space.exact())
                out << space.exact_dist(i, j);
            else
                out << format_double(space.dist(i, j));
        }
        out << "\n";
    }
}

void write_space_document(const std::string& path, const FiniteMetricSpace& space) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_space_document(out, space);
    if (!out) throw Error("failed writing '" + path + "'");
}

std::vector<std::vector<double>> parse_point_cloud(std::istream& in) {
    std::string raw;
    int number = 0;
    std::vector<std::vector<double>> points;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        for (char& ch : raw)
            if (ch == ',') ch = ' ';
        std::istringstream ls(raw);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) row.push_back(parse_double(tok, number));
        if (row.empty()) continue;
        if (!points.empty() && row.size() != points.front().size())
            throw ParseError(number, "row has " + std::to_string(row.size()) +
                                         " coordinates, expected " +
                                         std::to_string(points.front().size()));
        points.push_back(std::move(row));
    }
    if (points.empty()) throw ParseError(number, "no points in input");
    return points;
}

std::vector<std::vector<double>> read_point_cloud(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_point_cloud(in);
}

RawMatrix euclidean_matrix(const std::vector<std::vector<double>>& points) {
    const int n = static_cast<int>(points.size());
    RawMatrix m;
    m.n = n;
    for (int i = 0; i < n; ++i) m.labels.push_back("p" + std::to_string(i));
    m.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < points[i].size(); ++c) {
                double d = points[i][c] - points[j][c];
                s += d * d;
            }
            double d = std::sqrt(s);
            m.values[static_cast<std::size_t>(i) * n + j] = d;
            m.values[static_cast<std::size_t>(j) * n + i] = d;
        }
    return m;
}

}  // namespace loem
