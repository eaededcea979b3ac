#pragma once

#include <string>

#include "solenoidal/filters.hpp"
#include "solenoidal/msf.hpp"

namespace solenoidal {

// Filter file format:
//   {"d": int, "diag": [int], "K": int,
//    "terms": [{"exp": [int], "re_over_sqrtK": int, "im_over_sqrtK": int}]}
// Float filters replace the integer pair with {"re": float, "im": float};
// mixing the two styles in one file is rejected.
LaurentFilter filter_from_json_text(const std::string& text);
LaurentFilter filter_from_json_file(const std::string& path);
std::string filter_to_json_text(const LaurentFilter& f);

// FiberedSet format (rationals are "p/q" strings or integers):
//   {"regions": [{"box": {"lo": [rat], "hi": [rat]},
//                 "words": [{"prefix": [[int]], "period": [[int]]}],
//                 "cylinders": [[[int]]]}]}
FiberedSet fibered_set_from_json_text(const std::string& text, const DilationSpec& spec);
FiberedSet fibered_set_from_json_file(const std::string& path, const DilationSpec& spec);
std::string fibered_set_to_json_text(const FiberedSet& e);

// LambdaFunction format:
//   {"rules": [{"kind": "constant", "re": float, "im": float}
//              | {"kind": "inverse_scaling_shift", "shift": [rat]}]}
LambdaFunction lambda_from_json_text(const std::string& text);
LambdaFunction lambda_from_json_file(const std::string& path);
std::string lambda_to_json_text(const LambdaFunction& l);

}  // namespace solenoidal
