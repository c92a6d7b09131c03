#include "dvrforms/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace dvrforms {

namespace {

struct Token {
    std::string text;
    int line;
    int col;
};

std::vector<std::vector<Token>> tokenize(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<Token> toks;
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace((unsigned char)line[i])) {
                ++i;
                continue;
            }
            if (line[i] == '#') break;
            std::size_t start = i;
            while (i < line.size() && !std::isspace((unsigned char)line[i])) ++i;
            toks.push_back({line.substr(start, i - start), lineno, (int)start + 1});
        }
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return lines;
}

std::int64_t parse_int(const Token& t) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + t.text + "'", t.line, t.col);
    }
}

Int parse_big(const std::string& s, const Token& t) {
    if (s.empty()) throw ParseError("empty integer", t.line, t.col);
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw ParseError("malformed integer '" + s + "'", t.line, t.col);
    for (; i < s.size(); ++i)
        if (!std::isdigit((unsigned char)s[i]))
            throw ParseError("malformed integer '" + s + "'", t.line, t.col);
    return Int(s);
}

// Splits "a,b,c" at top-level commas of a bracket-stripped list.
std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool bracketed(const std::string& s) {
    return s.size() >= 2 && s.front() == '[' && s.back() == ']';
}

RingElement parse_entry(const RingPtr& ring, const Token& t) {
    const std::string& s = t.text;
    if (s == "0") return ring->zero();
    switch (ring->kind()) {
        case RingKind::series_trivial:
        case RingKind::series_ramified: {
            if (!bracketed(s)) {
                // bare integers are accepted as constants
                return ring->from_int(parse_int(t));
            }
            std::vector<std::int64_t> coeffs;
            for (const auto& part : split_list(s.substr(1, s.size() - 2)))
                coeffs.push_back(parse_big(part, t).convert_to<std::int64_t>());
            if ((int)coeffs.size() > ring->precision())
                throw ParseError("series literal longer than the precision " +
                                     std::to_string(ring->precision()),
                                 t.line, t.col);
            return ring->from_series(coeffs);
        }
        case RingKind::series_unramified: {
            if (!bracketed(s)) throw ParseError("expected [[a,b],...] entry", t.line, t.col);
            std::vector<std::pair<std::int64_t, std::int64_t>> coeffs;
            for (const auto& part : split_list(s.substr(1, s.size() - 2))) {
                if (!bracketed(part))
                    throw ParseError("expected [a,b] coefficient in '" + s + "'", t.line, t.col);
                auto ab = split_list(part.substr(1, part.size() - 2));
                if (ab.size() != 2)
                    throw ParseError("coefficient must be a pair [a,b]", t.line, t.col);
                coeffs.emplace_back(parse_big(ab[0], t).convert_to<std::int64_t>(),
                                    parse_big(ab[1], t).convert_to<std::int64_t>());
            }
            if ((int)coeffs.size() > ring->precision())
                throw ParseError("series literal longer than the precision " +
                                     std::to_string(ring->precision()),
                                 t.line, t.col);
            return ring->from_series_pairs(coeffs);
        }
        case RingKind::padic_trivial:
            return ring->from_integer(parse_big(s, t));
        case RingKind::padic_ramified:
        case RingKind::padic_unramified: {
            if (!bracketed(s)) throw ParseError("expected [a,b] entry", t.line, t.col);
            auto ab = split_list(s.substr(1, s.size() - 2));
            if (ab.size() != 2) throw ParseError("entry must be a pair [a,b]", t.line, t.col);
            return ring->from_pair(parse_big(ab[0], t), parse_big(ab[1], t));
        }
    }
    throw ParseError("unhandled ring kind", t.line, t.col);
}

} // namespace

InstanceFile parse_instance_text(const std::string& text, std::optional<int> precision_override) {
    auto lines = tokenize(text);
    std::size_t li = 0;
    auto need_line = [&](const char* what) -> std::vector<Token>& {
        if (li >= lines.size())
            throw ParseError(std::string("unexpected end of file, expected ") + what,
                             lines.empty() ? 1 : lines.back().front().line + 1, 1);
        return lines[li];
    };

    // ring <kind> p=<p> precision=<N>
    auto& ringline = need_line("'ring <kind> p=<p> precision=<N>'");
    if (ringline[0].text != "ring")
        throw ParseError("expected 'ring' header", ringline[0].line, ringline[0].col);
    if (ringline.size() != 4)
        throw ParseError("ring header needs kind, p=, precision=", ringline[0].line,
                         ringline[0].col);
    RingKind kind;
    if (!parse_ring_kind(ringline[1].text, kind))
        throw ParseError("unknown ring kind '" + ringline[1].text + "'", ringline[1].line,
                         ringline[1].col);
    auto keyed = [&](const Token& t, const std::string& key) -> std::int64_t {
        if (t.text.rfind(key + "=", 0) != 0)
            throw ParseError("expected '" + key + "=<value>'", t.line, t.col);
        Token vt{t.text.substr(key.size() + 1), t.line, t.col + (int)key.size() + 1};
        return parse_int(vt);
    };
    std::int64_t p = keyed(ringline[2], "p");
    int precision = (int)keyed(ringline[3], "precision");
    if (precision_override) precision = *precision_override;
    RingPtr ring;
    try {
        ring = Ring::make(kind, p, precision);
    } catch (const Error& e) {
        throw ParseError(e.what(), ringline[0].line, ringline[0].col);
    }
    ++li;

    // optional epsilon
    std::optional<int> epsilon;
    if (li < lines.size() && lines[li][0].text == "epsilon") {
        auto& el = lines[li];
        if (el.size() != 2) throw ParseError("epsilon needs a value", el[0].line, el[0].col);
        std::int64_t e = parse_int(el[1]);
        if (e != 1 && e != -1) throw ParseError("epsilon must be 1 or -1", el[1].line, el[1].col);
        epsilon = (int)e;
        ++li;
    }

    // matrix <m> followed by m rows
    auto& ml = need_line("'matrix <m>'");
    if (ml[0].text != "matrix") throw ParseError("expected 'matrix <m>'", ml[0].line, ml[0].col);
    if (ml.size() != 2) throw ParseError("matrix header needs a size", ml[0].line, ml[0].col);
    std::int64_t msize = parse_int(ml[1]);
    if (msize <= 0) throw ParseError("matrix size must be positive", ml[1].line, ml[1].col);
    ++li;

    RingMatrix matrix(ring, (std::size_t)msize, (std::size_t)msize);
    for (std::int64_t i = 0; i < msize; ++i) {
        auto& row = need_line("a matrix row");
        if ((std::int64_t)row.size() != msize)
            throw ParseError("matrix row has " + std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(msize),
                             row[0].line, row[0].col);
        for (std::int64_t j = 0; j < msize; ++j) {
            try {
                matrix.at(i, j) = parse_entry(ring, row[j]);
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                throw ParseError(e.what(), row[j].line, row[j].col);
            }
        }
        ++li;
    }
    if (li < lines.size())
        throw ParseError("unexpected trailing content", lines[li][0].line, lines[li][0].col);
    return InstanceFile{ring, epsilon, matrix};
}

InstanceFile read_instance_file(const std::string& path, std::optional<int> precision_override) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_text(buf.str(), precision_override);
}

std::string serialise_element(const RingElement& e) {
    const Ring& r = *e.ring();
    if (e.is_exact_zero()) return "0";
    std::ostringstream os;
    switch (r.kind()) {
        case RingKind::series_trivial:
        case RingKind::series_ramified: {
            int top = -1;
            for (int i = 0; i < r.precision(); ++i)
                if (e.series_coeff_a(i) != 0) top = i;
            os << "[";
            for (int i = 0; i <= std::max(top, 0); ++i) {
                if (i) os << ",";
                os << e.series_coeff_a(i);
            }
            os << "]";
            break;
        }
        case RingKind::series_unramified: {
            int top = -1;
            for (int i = 0; i < r.precision(); ++i)
                if (e.series_coeff_a(i) != 0 || e.series_coeff_b(i) != 0) top = i;
            os << "[";
            for (int i = 0; i <= std::max(top, 0); ++i) {
                if (i) os << ",";
                os << "[" << e.series_coeff_a(i) << "," << e.series_coeff_b(i) << "]";
            }
            os << "]";
            break;
        }
        case RingKind::padic_trivial:
            os << e.padic_a();
            break;
        case RingKind::padic_ramified:
        case RingKind::padic_unramified:
            os << "[" << e.padic_a() << "," << e.padic_b() << "]";
            break;
    }
    return os.str();
}

std::string serialise_instance(const RingMatrix& matrix, std::optional<int> epsilon) {
    const Ring& r = *matrix.ring();
    std::ostringstream os;
    os << "ring " << ring_kind_name(r.kind()) << " p=" << r.p() << " precision=" << r.precision()
       << "\n";
    if (epsilon) os << "epsilon " << *epsilon << "\n";
    os << "matrix " << matrix.rows() << "\n";
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        for (std::size_t j = 0; j < matrix.cols(); ++j) {
            if (j) os << " ";
            os << serialise_element(matrix.at(i, j));
        }
        os << "\n";
    }
    return os.str();
}

void write_instance_file(const std::string& path, const RingMatrix& matrix,
                         std::optional<int> epsilon) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << serialise_instance(matrix, epsilon);
}

} // namespace dvrforms
