#pragma once

#include <iosfwd>

#include "qmc/decode.hpp"

namespace qmc {

/// Codeword file: tower header line, params line, then one line per block
/// `<grid-index>: <csv of block_size integers>` in row-major grid order.
void write_codeword_file(std::ostream& os, const FieldTower& t, const CodeParams& p, const Codeword& w);

struct CodewordFile {
    FieldTower tower;
    CodeParams params;
    Codeword word;
};

CodewordFile read_codeword_file(std::istream& is);

/// Message file: tower header line, params line, then the polynomial in text
/// form on one line.
void write_message_file(std::ostream& os, const FieldTower& t, const CodeParams& p, const MultiPoly& f);

/// Reads just the polynomial (first non-comment, non-header line); the
/// caller checks arity and degree against its params.
MultiPoly read_message_file(std::istream& is);

/// Decoder result: context lines, then `dim=<d>`, base and basis polynomials,
/// then the filtered candidate list with agreement counts (or a
/// not-enumerated marker).
void write_decode_result(std::ostream& os, const FieldTower& t, const CodeParams& p, const DecodeResult& res);

}  // namespace qmc
