// JSON problem configs. A config either names a built-in or gives the
// coefficient tables of a quadratic-objective / affine-constraint instance:
//
//   {
//     "builtin": "nlp_toy"
//   }
// or
//   {
//     "name": "...",
//     "n": 3,
//     "cone": {"blocks": [{"orthant": 2}, {"soc": 3}, {"psd": 2}]},
//     "objective": {"Q": [[...]], "q": [...], "r": 0.0},
//     "equality": {"A": [[...]], "b": [...]},          // optional
//     "conic": {"G": [[...]], "d": [...]},             // optional
//     "x0": [...],                                     // optional inner start
//     "reference": {"x": [...], "lambda": [...], "mu": [...]}  // optional
//   }
//
// PSD rows of G, d, mu use packed coordinates (column-major upper triangle,
// off-diagonals scaled by sqrt(2)).
#pragma once

#include <string>

#include "soalm/program.hpp"

namespace soalm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedProblem {
  Program program;
  Vector x0;  // zeros unless the config provides one
};

LoadedProblem load_problem_json(const std::string& json_text);
LoadedProblem load_problem_file(const std::string& path);

std::string cone_to_json(const Cone& K);
Cone cone_from_json(const std::string& json_text);

}  // namespace soalm
