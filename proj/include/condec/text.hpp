/* Copyright 2026 The ConDec Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef CONDEC_TEXT_HPP_
#define CONDEC_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace condec {

std::string_view Trim(std::string_view s);
std::string_view TrimRight(std::string_view s);
std::string ToLower(std::string_view s);

/// Lowercases and splits on every byte that is not an ASCII letter or digit.
/// Bytes >= 0x80 are kept inside tokens so UTF-8 words stay whole.
std::vector<std::string> Tokenize(std::string_view text);

/// Token-level F1 between two sentences (multiset overlap of Tokenize()
/// output). Two empty token lists score 1, one empty list scores 0.
double TokenF1(std::string_view candidate, std::string_view reference);

}  // namespace condec

#endif  // CONDEC_TEXT_HPP_
