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

#ifndef CONDEC_BATCH_IO_HPP_
#define CONDEC_BATCH_IO_HPP_

// HiddenBatch files.
//
// Binary layout (all integers u64, all reals f64, little-endian):
//   n d p
//   W_proj            p*d reals, row-major
//   b_proj            p reals
//   n times:
//     src_len tgt_len neg_len      (neg_len 0 = no hard negative)
//     source          src_len*d reals
//     target          tgt_len*d reals
//     hard_negative   neg_len*d reals
//
// Text layout: whitespace-separated tokens, `#` starts a comment.
//   hiddenbatch <n> <d> <p>
//   w <p*d reals>
//   b <p reals>
//   instance
//     src <len> <len*d reals>
//     tgt <len> <len*d reals>
//     [neg <len> <len*d reals>]
//   ... (n instances)

#include <filesystem>
#include <iosfwd>
#include <string>

#include "condec/losskernel.hpp"

namespace condec::loss {

/// Throws Error(kIoError) when the file cannot be read and
/// Error(kRecordError) when it is truncated or malformed.
HiddenBatch ReadHiddenBatchBinary(const std::filesystem::path& path);
void WriteHiddenBatchBinary(const std::filesystem::path& path, const HiddenBatch& batch);

HiddenBatch ParseHiddenBatchText(std::istream& in);
HiddenBatch ReadHiddenBatchText(const std::filesystem::path& path);
std::string FormatHiddenBatchText(const HiddenBatch& batch);

/// Picks the binary reader for `.bin` files and the text reader otherwise.
HiddenBatch ReadHiddenBatch(const std::filesystem::path& path);

}  // namespace condec::loss

#endif  // CONDEC_BATCH_IO_HPP_
