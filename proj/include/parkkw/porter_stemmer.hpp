#pragma once

#include <string>
#include <string_view>

namespace parkkw {

// One pass of the original Porter (1980) suffix-stripping algorithm over a
// lowercase word.
std::string porter_stem(std::string_view word);

// Applies porter_stem until the word stops changing, so the result is a
// fixed point: stem(stem(w)) == stem(w).
std::string stem(std::string_view word);

}  // namespace parkkw
