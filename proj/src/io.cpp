#include "recomb/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

namespace recomb {

namespace {

// Line source that skips blank and comment lines and remembers line numbers.
class LineReader {
public:
    LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    // Next non-blank, non-comment line split into tokens; false at end of input.
    bool next(std::vector<std::string_view>& tokens) {
        while (std::getline(in_, line_)) {
            ++number_;
            if (!line_.empty() && line_.back() == '\r') line_.pop_back();
            const auto first = line_.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            if (line_[first] == '%' || line_[first] == '#') continue;
            split(tokens);
            return true;
        }
        return false;
    }

    // Raw next line without skipping; used for the Matrix Market banner.
    bool raw(std::string& out) {
        if (!std::getline(in_, out)) return false;
        ++number_;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
    }

    std::size_t line() const noexcept { return number_; }
    const std::string& name() const noexcept { return name_; }

    [[noreturn]] void fail(ParseErrorKind kind, const std::string& detail) const {
        throw ParseError(kind, name_, number_, detail);
    }

private:
    void split(std::vector<std::string_view>& tokens) const {
        tokens.clear();
        std::string_view s(line_);
        std::size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            const std::size_t start = i;
            while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            if (i > start) tokens.push_back(s.substr(start, i - start));
        }
    }

    std::istream& in_;
    std::string name_;
    std::string line_;
    std::size_t number_ = 0;
};

double parse_number(const LineReader& reader, std::string_view token) {
    std::string_view body = token;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || end != body.data() + body.size() || body.empty()) {
        reader.fail(ParseErrorKind::token, "'" + std::string(token) + "' is not a number");
    }
    if (!std::isfinite(value)) reader.fail(ParseErrorKind::token, "'" + std::string(token) + "' is not finite");
    return value;
}

std::size_t parse_count(const LineReader& reader, std::string_view token, ParseErrorKind kind) {
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size()) {
        reader.fail(kind, "'" + std::string(token) + "' is not a nonnegative integer");
    }
    return value;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

enum class Symmetry { general, symmetric, skew, hermitian };

struct Banner {
    bool coordinate = false;
    bool complex = false;
    Symmetry symmetry = Symmetry::general;
};

Banner read_banner(LineReader& reader) {
    std::string line;
    if (!reader.raw(line)) reader.fail(ParseErrorKind::header, "empty file");
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string t; words >> t;) w.push_back(t);
    if (w.size() != 5 || w[0] != "%%MatrixMarket") {
        reader.fail(ParseErrorKind::header, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
    }
    if (lower(w[1]) != "matrix") reader.fail(ParseErrorKind::header, "object must be 'matrix', got '" + w[1] + "'");

    Banner b;
    const std::string format = lower(w[2]);
    if (format == "coordinate") b.coordinate = true;
    else if (format != "array") reader.fail(ParseErrorKind::header, "unknown format '" + w[2] + "'");

    const std::string field = lower(w[3]);
    if (field == "complex") b.complex = true;
    else if (field == "pattern") reader.fail(ParseErrorKind::header, "pattern matrices carry no values");
    else if (field != "real" && field != "integer" && field != "double") {
        reader.fail(ParseErrorKind::header, "unknown field '" + w[3] + "'");
    }

    const std::string sym = lower(w[4]);
    if (sym == "general") b.symmetry = Symmetry::general;
    else if (sym == "symmetric") b.symmetry = Symmetry::symmetric;
    else if (sym == "skew-symmetric") b.symmetry = Symmetry::skew;
    else if (sym == "hermitian") b.symmetry = Symmetry::hermitian;
    else reader.fail(ParseErrorKind::header, "unknown symmetry '" + w[4] + "'");
    if (b.symmetry == Symmetry::hermitian && !b.complex) {
        reader.fail(ParseErrorKind::header, "hermitian storage requires the complex field");
    }
    return b;
}

template <Field S>
S read_value(const LineReader& reader, std::span<const std::string_view> tokens) {
    if constexpr (is_complex_v<S>) {
        return S{parse_number(reader, tokens[0]), parse_number(reader, tokens[1])};
    } else {
        return parse_number(reader, tokens[0]);
    }
}

template <Field S>
S mirror_value(const S& value, Symmetry symmetry) {
    switch (symmetry) {
    case Symmetry::skew: return -value;
    case Symmetry::hermitian: return conj_of(value);
    default: return value;
    }
}

template <Field S>
DenseMatrix<S> read_market_body(LineReader& reader, const Banner& banner) {
    constexpr std::size_t width = is_complex_v<S> ? 2 : 1;
    std::vector<std::string_view> tok;
    if (!reader.next(tok)) reader.fail(ParseErrorKind::size, "missing size line");
    const std::size_t want = banner.coordinate ? 3 : 2;
    if (tok.size() != want) {
        reader.fail(ParseErrorKind::size, "expected " + std::to_string(want) + " integers on the size line");
    }
    const std::size_t rows = parse_count(reader, tok[0], ParseErrorKind::size);
    const std::size_t cols = parse_count(reader, tok[1], ParseErrorKind::size);
    if (rows == 0 || cols == 0) reader.fail(ParseErrorKind::size, "dimensions must be positive");
    if (banner.symmetry != Symmetry::general && rows != cols) {
        reader.fail(ParseErrorKind::size, "symmetric storage requires a square matrix");
    }
    DenseMatrix<S> a(rows, cols);

    if (banner.coordinate) {
        const std::size_t nnz = parse_count(reader, tok[2], ParseErrorKind::size);
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (std::size_t e = 0; e < nnz; ++e) {
            if (!reader.next(tok)) {
                throw ParseError(ParseErrorKind::count, reader.name(), reader.line(),
                                 "expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
            }
            if (tok.size() != 2 + width) {
                reader.fail(ParseErrorKind::count, "expected " + std::to_string(2 + width) + " fields per entry");
            }
            const std::size_t i = parse_count(reader, tok[0], ParseErrorKind::index);
            const std::size_t j = parse_count(reader, tok[1], ParseErrorKind::index);
            if (i < 1 || i > rows || j < 1 || j > cols) {
                reader.fail(ParseErrorKind::index, "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                                       ") outside a " + std::to_string(rows) + "x" +
                                                       std::to_string(cols) + " matrix");
            }
            const S value = read_value<S>(reader, std::span(tok).subspan(2));
            if (banner.symmetry != Symmetry::general && i < j) {
                reader.fail(ParseErrorKind::index, "symmetric storage lists the lower triangle only");
            }
            if (banner.symmetry == Symmetry::skew && i == j) {
                reader.fail(ParseErrorKind::index, "skew-symmetric storage has no diagonal entries");
            }
            if (!seen.insert({i, j}).second) {
                reader.fail(ParseErrorKind::duplicate,
                            "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") appears twice");
            }
            a(i - 1, j - 1) = value;
            if (banner.symmetry != Symmetry::general && i != j) a(j - 1, i - 1) = mirror_value(value, banner.symmetry);
        }
    } else {
        // Column-major; symmetric layouts store the lower triangle only.
        std::vector<std::pair<std::size_t, std::size_t>> order;
        for (std::size_t j = 0; j < cols; ++j) {
            std::size_t first = 0;
            if (banner.symmetry == Symmetry::symmetric || banner.symmetry == Symmetry::hermitian) first = j;
            if (banner.symmetry == Symmetry::skew) first = j + 1;
            for (std::size_t i = first; i < rows; ++i) order.emplace_back(i, j);
        }
        std::size_t e = 0;
        while (e < order.size()) {
            if (!reader.next(tok)) {
                throw ParseError(ParseErrorKind::count, reader.name(), reader.line(),
                                 "expected " + std::to_string(order.size()) + " values, found " +
                                     std::to_string(e));
            }
            if (tok.size() != width) {
                reader.fail(ParseErrorKind::count, "expected " + std::to_string(width) + " field(s) per value");
            }
            const auto [i, j] = order[e++];
            const S value = read_value<S>(reader, tok);
            a(i, j) = value;
            if (banner.symmetry != Symmetry::general && i != j) a(j, i) = mirror_value(value, banner.symmetry);
        }
    }
    if (reader.next(tok)) reader.fail(ParseErrorKind::count, "unexpected data after the last entry");
    return a;
}

template <Field S>
Vector<S> promote(const Vector<double>& v) {
    return Vector<S>(v.begin(), v.end());
}

DenseMatrix<Complex> promote_matrix(const DenseMatrix<double>& a) {
    std::vector<Complex> e(a.entries().begin(), a.entries().end());
    return DenseMatrix<Complex>(a.rows(), a.cols(), std::move(e));
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

template <Field S>
void put_value(std::ostream& out, const S& v) {
    if constexpr (is_complex_v<S>) {
        out << format_double(v.real()) << ' ' << format_double(v.imag());
    } else {
        out << format_double(v);
    }
}

} // namespace

AnyMatrix parse_matrix_market(std::istream& in, const std::string& name) {
    LineReader reader(in, name);
    const Banner banner = read_banner(reader);
    if (banner.complex) return read_market_body<Complex>(reader, banner);
    return read_market_body<double>(reader, banner);
}

MatrixFile parse_dense_text(std::istream& in, const std::string& name) {
    LineReader reader(in, name);
    std::vector<std::string_view> tok;
    if (!reader.next(tok)) reader.fail(ParseErrorKind::size, "missing size line");
    if (tok.size() != 2 && tok.size() != 3) reader.fail(ParseErrorKind::size, "expected 'm n [real|complex]'");
    const std::size_t rows = parse_count(reader, tok[0], ParseErrorKind::size);
    const std::size_t cols = parse_count(reader, tok[1], ParseErrorKind::size);
    if (rows == 0 || cols == 0) reader.fail(ParseErrorKind::size, "dimensions must be positive");
    bool complex = false;
    if (tok.size() == 3) {
        const std::string field = lower(tok[2]);
        if (field == "complex") complex = true;
        else if (field != "real") reader.fail(ParseErrorKind::size, "unknown field '" + std::string(tok[2]) + "'");
    }

    auto body = [&](auto tag) -> MatrixFile {
        using S = decltype(tag);
        constexpr std::size_t width = is_complex_v<S> ? 2 : 1;
        DenseMatrix<S> a(rows, cols);
        Vector<S> rhs;
        std::optional<bool> embedded;
        for (std::size_t i = 0; i < rows; ++i) {
            if (!reader.next(tok)) {
                throw ParseError(ParseErrorKind::count, reader.name(), reader.line(),
                                 "expected " + std::to_string(rows) + " rows, found " + std::to_string(i));
            }
            const bool has_rhs = tok.size() == (cols + 1) * width;
            if (tok.size() != cols * width && !has_rhs) {
                reader.fail(ParseErrorKind::count, "row " + std::to_string(i + 1) + " has " +
                                                       std::to_string(tok.size()) + " values, expected " +
                                                       std::to_string(cols * width));
            }
            if (embedded && *embedded != has_rhs) {
                reader.fail(ParseErrorKind::count, "rows disagree on whether a right-hand column is present");
            }
            embedded = has_rhs;
            std::span<const std::string_view> all(tok);
            for (std::size_t j = 0; j < cols; ++j) a(i, j) = read_value<S>(reader, all.subspan(j * width, width));
            if (has_rhs) rhs.push_back(read_value<S>(reader, all.subspan(cols * width, width)));
        }
        if (reader.next(tok)) reader.fail(ParseErrorKind::count, "unexpected data after the last row");
        MatrixFile file{AnyMatrix(std::move(a)), std::nullopt};
        if (embedded.value_or(false)) file.embedded_rhs = AnyVector(std::move(rhs));
        return file;
    };
    return complex ? body(Complex{}) : body(0.0);
}

AnyVector parse_rhs(std::istream& in, const std::string& name) {
    LineReader reader(in, name);
    std::vector<std::string_view> tok;
    std::vector<double> re;
    std::vector<Complex> cx;
    std::optional<std::size_t> width;
    while (reader.next(tok)) {
        if (tok.size() != 1 && tok.size() != 2) reader.fail(ParseErrorKind::count, "expected one value per line");
        if (width && *width != tok.size()) reader.fail(ParseErrorKind::count, "mixed real and complex lines");
        width = tok.size();
        if (tok.size() == 1) re.push_back(parse_number(reader, tok[0]));
        else cx.emplace_back(parse_number(reader, tok[0]), parse_number(reader, tok[1]));
    }
    if (!width) throw ParseError(ParseErrorKind::missing, name, reader.line(), "right-hand side is empty");
    if (*width == 2) return cx;
    return re;
}

MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string first;
    const auto start = in.tellg();
    std::getline(in, first);
    in.clear();
    in.seekg(start);
    if (first.rfind("%%MatrixMarket", 0) == 0) return MatrixFile{parse_matrix_market(in, path), std::nullopt};
    return parse_dense_text(in, path);
}

AnyVector read_rhs_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return parse_rhs(in, path);
}

AnySystem parse_system(const std::string& matrix_path, const std::optional<std::string>& rhs_path) {
    MatrixFile file = read_matrix_file(matrix_path);
    AnyVector rhs;
    if (rhs_path) {
        rhs = read_rhs_file(*rhs_path);
    } else if (file.embedded_rhs) {
        rhs = std::move(*file.embedded_rhs);
    } else {
        throw ParseError(ParseErrorKind::missing, matrix_path, 0, "no right-hand side given and none embedded");
    }

    const bool complex = std::holds_alternative<DenseMatrix<Complex>>(file.matrix) ||
                         std::holds_alternative<Vector<Complex>>(rhs);
    const std::size_t rows = std::visit([](const auto& a) { return a.rows(); }, file.matrix);
    const std::size_t length = std::visit([](const auto& v) { return v.size(); }, rhs);
    if (rows != length) {
        throw ParseError(ParseErrorKind::size, rhs_path.value_or(matrix_path), 0,
                         "matrix has " + std::to_string(rows) + " rows but the right-hand side has " +
                             std::to_string(length) + " entries");
    }

    if (!complex) {
        return LinearSystem<double>{std::get<DenseMatrix<double>>(file.matrix), std::get<Vector<double>>(rhs)};
    }
    DenseMatrix<Complex> a = std::holds_alternative<DenseMatrix<Complex>>(file.matrix)
                                 ? std::get<DenseMatrix<Complex>>(file.matrix)
                                 : promote_matrix(std::get<DenseMatrix<double>>(file.matrix));
    Vector<Complex> b = std::holds_alternative<Vector<Complex>>(rhs) ? std::get<Vector<Complex>>(rhs)
                                                                       : promote<Complex>(std::get<Vector<double>>(rhs));
    return LinearSystem<Complex>{std::move(a), std::move(b)};
}

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) throw IoError("cannot format number");
    return std::string(buf.data(), end);
}

template <Field S>
void write_dense_text(std::ostream& out, const DenseMatrix<S>& a, const Vector<S>* rhs) {
    if (rhs && rhs->size() != a.rows()) throw DimensionError("write_dense_text: rhs length mismatch");
    out << a.rows() << ' ' << a.cols();
    if constexpr (is_complex_v<S>) out << " complex";
    out << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j) out << ' ';
            put_value(out, a(i, j));
        }
        if (rhs) {
            out << ' ';
            put_value(out, (*rhs)[i]);
        }
        out << '\n';
    }
}

template <Field S>
void write_matrix_market(std::ostream& out, const DenseMatrix<S>& a, bool coordinate) {
    out << "%%MatrixMarket matrix " << (coordinate ? "coordinate" : "array") << ' '
        << (is_complex_v<S> ? "complex" : "real") << " general\n";
    if (coordinate) {
        std::size_t nnz = 0;
        for (const S& e : a.entries()) nnz += e != S{} ? 1 : 0;
        out << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t i = 0; i < a.rows(); ++i) {
                if (a(i, j) == S{}) continue;
                out << i + 1 << ' ' << j + 1 << ' ';
                put_value(out, a(i, j));
                out << '\n';
            }
        }
    } else {
        out << a.rows() << ' ' << a.cols() << '\n';
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t i = 0; i < a.rows(); ++i) {
                put_value(out, a(i, j));
                out << '\n';
            }
        }
    }
}

template <Field S>
void write_rhs(std::ostream& out, std::span<const S> b) {
    for (const S& v : b) {
        put_value(out, v);
        out << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template void write_dense_text<double>(std::ostream&, const DenseMatrix<double>&, const Vector<double>*);
template void write_dense_text<Complex>(std::ostream&, const DenseMatrix<Complex>&, const Vector<Complex>*);
template void write_matrix_market<double>(std::ostream&, const DenseMatrix<double>&, bool);
template void write_matrix_market<Complex>(std::ostream&, const DenseMatrix<Complex>&, bool);
template void write_rhs<double>(std::ostream&, std::span<const double>);
template void write_rhs<Complex>(std::ostream&, std::span<const Complex>);

} // namespace recomb
