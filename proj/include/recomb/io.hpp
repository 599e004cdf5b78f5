#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "recomb/errors.hpp"
#include "recomb/linop.hpp"
#include "recomb/scalar.hpp"

namespace recomb {

using AnyMatrix = std::variant<DenseMatrix<double>, DenseMatrix<Complex>>;
using AnyVector = std::variant<Vector<double>, Vector<Complex>>;
using AnySystem = std::variant<LinearSystem<double>, LinearSystem<Complex>>;

// A matrix file plus the right-hand column a dense text file may carry.
struct MatrixFile {
    AnyMatrix matrix;
    std::optional<AnyVector> embedded_rhs;
};

// Matrix Market, array or coordinate layout, real/integer/complex values,
// general/symmetric/skew-symmetric/hermitian storage (expanded to dense).
// `name` only labels diagnostics.
AnyMatrix parse_matrix_market(std::istream& in, const std::string& name);

// Whitespace text: a size line "m n" (optionally followed by "real" or
// "complex"), then m rows of n values; complex values are "re im" pairs. Rows
// with one extra value carry the right-hand side in their last entry.
MatrixFile parse_dense_text(std::istream& in, const std::string& name);

// One value per line ("re im" for complex). '%' and '#' start comments.
AnyVector parse_rhs(std::istream& in, const std::string& name);

// Chooses the matrix format from the first line ("%%MatrixMarket" or not).
MatrixFile read_matrix_file(const std::string& path);
AnyVector read_rhs_file(const std::string& path);

// Matrix and right-hand side as one system; a real matrix paired with a complex
// rhs (or the reverse) is promoted to complex. Without rhs_path the matrix
// file must embed the right-hand column.
AnySystem parse_system(const std::string& matrix_path, const std::optional<std::string>& rhs_path);

// Shortest decimal text that reads back to exactly x.
std::string format_double(double x);

template <Field S>
void write_dense_text(std::ostream& out, const DenseMatrix<S>& a, const Vector<S>* rhs = nullptr);

template <Field S>
void write_matrix_market(std::ostream& out, const DenseMatrix<S>& a, bool coordinate);

template <Field S>
void write_rhs(std::ostream& out, std::span<const S> b);

// Writes through a temporary string so a failed open or write reports the path.
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

} // namespace recomb
