#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "cauchy/errors.hpp"
#include "cauchy/mesh.hpp"

namespace cauchy {

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-blank line split into whitespace-separated tokens.
    std::vector<std::string> next(const char* expecting) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            std::istringstream ss(line);
            std::vector<std::string> tokens;
            for (std::string tok; ss >> tok;) tokens.push_back(tok);
            if (!tokens.empty()) return tokens;
        }
        throw ParseError(line_no_ + 1, std::string("unexpected end of file, expected ") + expecting);
    }

    [[nodiscard]] std::size_t line() const noexcept { return line_no_; }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

double to_double(const std::string& tok, std::size_t line) {
    double v = 0.0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ParseError(line, "invalid number '" + tok + "'");
    return v;
}

std::size_t to_count(const std::string& tok, std::size_t line) {
    std::size_t v = 0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ParseError(line, "invalid non-negative integer '" + tok + "'");
    return v;
}

Index to_index(const std::string& tok, std::size_t line) {
    const auto v = to_count(tok, line);
    if (v > std::numeric_limits<Index>::max()) throw ParseError(line, "index too large: " + tok);
    return static_cast<Index>(v);
}

std::size_t section(LineReader& reader, const char* keyword) {
    const auto tokens = reader.next(keyword);
    if (tokens.size() != 2 || tokens[0] != keyword)
        throw ParseError(reader.line(), std::string("expected '") + keyword + " <count>'");
    return to_count(tokens[1], reader.line());
}

SegmentLabel parse_label(const std::string& tok, std::size_t line) {
    if (tok == "G0") return SegmentLabel::Gamma0;
    if (tok == "G11") return SegmentLabel::Gamma1_1;
    if (tok == "G12") return SegmentLabel::Gamma1_2;
    throw ParseError(line, "unknown boundary label '" + tok + "' (expected G0, G11 or G12)");
}

}  // namespace

void write_mesh(const TriMesh& mesh, std::ostream& out) {
    out << "tmesh 1\n";
    out << "vertices " << mesh.num_vertices() << '\n';
    out << std::setprecision(17);
    for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
    out << "triangles " << mesh.num_triangles() << '\n';
    for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "bedges " << mesh.boundary_edges().size() << '\n';
    for (const auto& e : mesh.boundary_edges())
        out << e.a << ' ' << e.b << ' ' << to_string(e.label) << '\n';
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_mesh(mesh, out);
    if (!out) throw IoError("failed writing " + path.string());
}

TriMesh read_mesh(std::istream& in) {
    LineReader reader(in);
    {
        const auto header = reader.next("header");
        if (header.size() != 2 || header[0] != "tmesh" || header[1] != "1")
            throw ParseError(reader.line(), "expected header 'tmesh 1'");
    }

    std::vector<Point2> vertices(section(reader, "vertices"));
    for (auto& p : vertices) {
        const auto tok = reader.next("vertex");
        if (tok.size() != 2) throw ParseError(reader.line(), "vertex line needs 'x y'");
        p = {to_double(tok[0], reader.line()), to_double(tok[1], reader.line())};
    }

    std::vector<Triangle> triangles(section(reader, "triangles"));
    for (auto& t : triangles) {
        const auto tok = reader.next("triangle");
        if (tok.size() != 3) throw ParseError(reader.line(), "triangle line needs 'i j k'");
        for (int k = 0; k < 3; ++k) t[k] = to_index(tok[k], reader.line());
    }

    std::vector<BoundaryEdge> edges(section(reader, "bedges"));
    for (auto& e : edges) {
        const auto tok = reader.next("boundary edge");
        if (tok.size() != 3) throw ParseError(reader.line(), "boundary edge line needs 'a b LABEL'");
        e = {to_index(tok[0], reader.line()), to_index(tok[1], reader.line()),
             parse_label(tok[2], reader.line())};
    }

    std::size_t line = reader.line();
    for (std::string rest; std::getline(in, rest);) {
        ++line;
        if (rest.find_first_not_of(" \t\r") != std::string::npos)
            throw ParseError(line, "trailing content after boundary edges");
    }
    return TriMesh(std::move(vertices), std::move(triangles), std::move(edges));
}

TriMesh read_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_mesh(in);
}

}  // namespace cauchy
