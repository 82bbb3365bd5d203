#pragma once

#include "pta/model.hpp"

#include <iosfwd>
#include <string>

namespace pta {

// Parses the line-oriented model format:
//
//   location <id> [init] [target] [avoid]
//   clock <id>
//   param <id> <lo> <hi>
//   deadline <nat>
//   trans [<id>:] <src> <input> {<clk>,...} <guard> <dst>
//
// `#` starts a comment, guards are `true` or `&`-joined atoms
// `<clock> <op> <expr>` with op in {<, <=, >, >=} and expr a sum of
// naturals and (scaled) parameters. Throws ParseError for syntax problems
// and SemanticError for ill-formed models.
Model parse_model(std::istream& in);
Model parse_model(const std::string& text);
Model parse_model_file(const std::string& path);

// Renders a model back into the text format; parse_model(print_model(m))
// is structurally equal to m.
std::string print_model(const Model& model);

}  // namespace pta
