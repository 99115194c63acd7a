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

#include "condec/batch_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace condec::loss {
namespace {

constexpr std::uint64_t kMaxDim = 1u << 20;

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kRecordError, "hidden batch: " + what);
}

class ByteReader {
 public:
  explicit ByteReader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

  std::uint64_t U64() {
    Need(8);
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | bytes_[pos_ + k];
    pos_ += 8;
    return v;
  }

  double F64() { return std::bit_cast<double>(U64()); }

  Matrix Rows(std::uint64_t rows, std::uint64_t cols) {
    if (rows > kMaxDim || cols > kMaxDim) Malformed("dimension out of range");
    Need(rows * cols * 8);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = F64();
    }
    return m;
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::uint64_t n) {
    if (n > bytes_.size() - pos_) Malformed("truncated file");
  }

  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

void PutU64(std::string& out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void PutMatrix(std::string& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      PutU64(out, std::bit_cast<std::uint64_t>(m(r, c)));
    }
  }
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back(tok);
    }
  }

  bool AtEnd() const { return pos_ == tokens_.size(); }
  const std::string& Peek() const {
    if (AtEnd()) Malformed("unexpected end of text");
    return tokens_[pos_];
  }
  void Expect(const std::string& word) {
    if (Peek() != word) Malformed("expected '" + word + "', found '" + Peek() + "'");
    ++pos_;
  }
  std::uint64_t Count() {
    const auto& t = Peek();
    std::uint64_t v = 0;
    std::size_t used = 0;
    try {
      v = std::stoull(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || t.front() == '-' || v > kMaxDim) Malformed("bad count '" + t + "'");
    ++pos_;
    return v;
  }
  double Real() {
    const auto& t = Peek();
    double v = 0;
    std::size_t used = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) Malformed("bad number '" + t + "'");
    ++pos_;
    return v;
  }
  Matrix Rows(std::uint64_t rows, std::uint64_t cols) {
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = Real();
    }
    return m;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

HiddenBatch ReadHiddenBatchBinary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  ByteReader reader(std::move(bytes));

  HiddenBatch batch;
  const auto n = reader.U64();
  const auto d = reader.U64();
  const auto p = reader.U64();
  if (n > kMaxDim || d > kMaxDim || p > kMaxDim) Malformed("header out of range");
  batch.d = static_cast<Eigen::Index>(d);
  batch.p = static_cast<Eigen::Index>(p);
  batch.w_proj = reader.Rows(p, d);
  batch.b_proj = reader.Rows(p, 1).col(0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto src = reader.U64();
    const auto tgt = reader.U64();
    const auto neg = reader.U64();
    if (src == 0 || tgt == 0) Malformed("instance " + std::to_string(i) + " has an empty sequence");
    BatchInstance inst;
    inst.source = reader.Rows(src, d);
    inst.target = reader.Rows(tgt, d);
    if (neg > 0) inst.hard_negative = reader.Rows(neg, d);
    batch.instances.push_back(std::move(inst));
  }
  if (!reader.AtEnd()) Malformed("trailing bytes after the last instance");
  batch.Validate();
  return batch;
}

void WriteHiddenBatchBinary(const std::filesystem::path& path, const HiddenBatch& batch) {
  batch.Validate();
  std::string out;
  PutU64(out, batch.n());
  PutU64(out, static_cast<std::uint64_t>(batch.d));
  PutU64(out, static_cast<std::uint64_t>(batch.p));
  PutMatrix(out, batch.w_proj);
  for (Eigen::Index r = 0; r < batch.b_proj.size(); ++r) {
    PutU64(out, std::bit_cast<std::uint64_t>(batch.b_proj(r)));
  }
  for (const auto& inst : batch.instances) {
    PutU64(out, static_cast<std::uint64_t>(inst.source.rows()));
    PutU64(out, static_cast<std::uint64_t>(inst.target.rows()));
    PutU64(out, inst.hard_negative ? static_cast<std::uint64_t>(inst.hard_negative->rows()) : 0);
    PutMatrix(out, inst.source);
    PutMatrix(out, inst.target);
    if (inst.hard_negative) PutMatrix(out, *inst.hard_negative);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::kIoError, "write failure on " + path.string());
}

HiddenBatch ParseHiddenBatchText(std::istream& in) {
  TokenReader reader(in);
  reader.Expect("hiddenbatch");
  const auto n = reader.Count();
  HiddenBatch batch;
  const auto d = reader.Count();
  const auto p = reader.Count();
  batch.d = static_cast<Eigen::Index>(d);
  batch.p = static_cast<Eigen::Index>(p);
  reader.Expect("w");
  batch.w_proj = reader.Rows(p, d);
  reader.Expect("b");
  batch.b_proj = reader.Rows(p, 1).col(0);
  for (std::uint64_t i = 0; i < n; ++i) {
    reader.Expect("instance");
    BatchInstance inst;
    reader.Expect("src");
    const auto src = reader.Count();
    if (src == 0) Malformed("empty source in instance " + std::to_string(i));
    inst.source = reader.Rows(src, d);
    reader.Expect("tgt");
    const auto tgt = reader.Count();
    if (tgt == 0) Malformed("empty target in instance " + std::to_string(i));
    inst.target = reader.Rows(tgt, d);
    if (!reader.AtEnd() && reader.Peek() == "neg") {
      reader.Expect("neg");
      const auto neg = reader.Count();
      if (neg == 0) Malformed("empty hard negative in instance " + std::to_string(i));  // omit the block instead
      inst.hard_negative = reader.Rows(neg, d);
    }
    batch.instances.push_back(std::move(inst));
  }
  if (!reader.AtEnd()) Malformed("unexpected token '" + reader.Peek() + "'");
  batch.Validate();
  return batch;
}

HiddenBatch ReadHiddenBatchText(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return ParseHiddenBatchText(in);
}

std::string FormatHiddenBatchText(const HiddenBatch& batch) {
  batch.Validate();
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  auto rows = [&](const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out << "   ";
      for (Eigen::Index c = 0; c < m.cols(); ++c) out << ' ' << m(r, c);
      out << '\n';
    }
  };
  out << "hiddenbatch " << batch.n() << ' ' << batch.d << ' ' << batch.p << '\n';
  out << "w\n";
  rows(batch.w_proj);
  out << "b\n";
  rows(batch.b_proj.transpose());
  for (const auto& inst : batch.instances) {
    out << "instance\n  src " << inst.source.rows() << '\n';
    rows(inst.source);
    out << "  tgt " << inst.target.rows() << '\n';
    rows(inst.target);
    if (inst.hard_negative) {
      out << "  neg " << inst.hard_negative->rows() << '\n';
      rows(*inst.hard_negative);
    }
  }
  return out.str();
}

HiddenBatch ReadHiddenBatch(const std::filesystem::path& path) {
  if (path.extension() == ".bin") return ReadHiddenBatchBinary(path);
  return ReadHiddenBatchText(path);
}

}  // namespace condec::loss
