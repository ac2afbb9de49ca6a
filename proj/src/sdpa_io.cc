#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "homocp/errors.h"
#include "homocp/sdp.h"

namespace homocp {

namespace {

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

using EntryKey = std::tuple<int, int, int, int>;  // matno, blkno, i, j (1-based)

}  // namespace

std::string ExportSdpa(const SdpStandardForm& form) {
  if (form.num_vars == 0 || (form.blocks.empty() && form.equalities.empty())) {
    throw IoError("cannot export an SDP without variables or constraints");
  }
  const int num_psd = static_cast<int>(form.blocks.size());
  const bool has_eq = !form.equalities.empty();
  const int num_blocks = num_psd + (has_eq ? 1 : 0);

  std::map<EntryKey, double> entries;
  for (int k = 0; k < num_psd; ++k) {
    for (const auto& e : form.blocks[k].entries) {
      const int mat = e.var == kConstantTerm ? 0 : e.var + 1;
      const double v = e.var == kConstantTerm ? -e.value : e.value;
      entries[{mat, k + 1, std::min(e.row, e.col) + 1, std::max(e.row, e.col) + 1}] += v;
    }
  }
  if (has_eq) {
    const int blk = num_psd + 1;
    for (std::size_t r = 0; r < form.equalities.size(); ++r) {
      const int plus = static_cast<int>(2 * r + 1);
      const int minus = plus + 1;
      const auto& row = form.equalities[r];
      for (const auto& [var, c] : row.coeffs) {
        entries[{var + 1, blk, plus, plus}] += c;
        entries[{var + 1, blk, minus, minus}] -= c;
      }
      entries[{0, blk, plus, plus}] += row.rhs;
      entries[{0, blk, minus, minus}] -= row.rhs;
    }
  }

  std::ostringstream out;
  out << "\"homocp SDPA export: y = decision vector (pseudo-moments, then slacks)\n";
  out << "\"minimize sum_i c_i y_i s.t. sum_i F_i y_i - F_0 >= 0 in every block\n";
  out << "\"variables " << form.num_vars << " slacks " << form.num_slacks << "\n";
  for (int k = 0; k < num_psd; ++k) {
    out << "\"block " << k + 1 << " psd " << form.blocks[k].label << "\n";
  }
  if (has_eq) {
    out << "\"block " << num_blocks << " equalities " << form.equalities.size()
        << " (diagonal pairs +/-(a_r^T y - b_r) >= 0)\n";
  }
  out << form.num_vars << "\n" << num_blocks << "\n";
  for (int k = 0; k < num_psd; ++k) out << (k ? " " : "") << form.blocks[k].side;
  if (has_eq) out << (num_psd ? " " : "") << -2 * static_cast<int>(form.equalities.size());
  out << "\n";
  for (int i = 0; i < form.num_vars; ++i) out << (i ? " " : "") << FormatDouble(form.objective[i]);
  out << "\n";
  for (const auto& [key, v] : entries) {
    if (v == 0.0) continue;
    const auto& [mat, blk, i, j] = key;
    out << mat << ' ' << blk << ' ' << i << ' ' << j << ' ' << FormatDouble(v) << "\n";
  }
  return out.str();
}

void WriteSdpaFile(const SdpStandardForm& form, const std::string& path) {
  const std::string text = ExportSdpa(form);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

SdpStandardForm ParseSdpa(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::map<int, std::string> psd_labels;
  int eq_block = -1;
  int num_slacks = 0;
  std::vector<std::string> body;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) {
      std::istringstream c(line.substr(1));
      std::string word;
      c >> word;
      if (word == "variables") {
        std::string slack_word;
        int n = 0;
        c >> n >> slack_word >> num_slacks;
      } else if (word == "block") {
        int k = 0;
        std::string kind;
        c >> k >> kind;
        if (kind == "psd") {
          std::string label;
          std::getline(c, label);
          if (!label.empty() && label[0] == ' ') label.erase(0, 1);
          psd_labels[k] = label;
        } else if (kind == "equalities") {
          eq_block = k;
        }
      }
      continue;
    }
    for (char& ch : line) {
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    }
    body.push_back(line);
  }

  std::istringstream tokens([&] {
    std::string all;
    for (const auto& l : body) all += l + "\n";
    return all;
  }());
  int m = 0;
  int nblocks = 0;
  if (!(tokens >> m >> nblocks) || m <= 0 || nblocks <= 0) throw IoError("bad SDPA header");
  std::vector<int> sizes(nblocks);
  for (int& s : sizes) {
    if (!(tokens >> s) || s == 0) throw IoError("bad SDPA block sizes");
  }
  SdpStandardForm form;
  form.num_vars = m;
  form.num_slacks = num_slacks;
  form.objective.resize(m);
  for (double& c : form.objective) {
    if (!(tokens >> c)) throw IoError("bad SDPA objective vector");
  }

  // block index (1-based) -> position in form.blocks, or -1 for the equality block
  std::map<int, int> block_pos;
  for (int k = 1; k <= nblocks; ++k) {
    if (k == eq_block) {
      if (sizes[k - 1] >= 0 || sizes[k - 1] % 2 != 0) throw IoError("bad equality block size");
      form.equalities.resize(-sizes[k - 1] / 2);
      block_pos[k] = -1;
      continue;
    }
    PsdMap block;
    block.side = std::abs(sizes[k - 1]);
    block.label = psd_labels.count(k) ? psd_labels[k] : "block " + std::to_string(k);
    block_pos[k] = static_cast<int>(form.blocks.size());
    form.blocks.push_back(std::move(block));
  }

  int mat = 0;
  int blk = 0;
  int i = 0;
  int j = 0;
  double v = 0;
  while (tokens >> mat) {
    if (!(tokens >> blk >> i >> j >> v)) throw IoError("truncated SDPA entry");
    if (mat < 0 || mat > m || blk < 1 || blk > nblocks) throw IoError("SDPA entry out of range");
    const int side = std::abs(sizes[blk - 1]);
    if (i < 1 || j < 1 || i > side || j > side) throw IoError("SDPA entry index out of range");
    const int pos = block_pos[blk];
    if (pos < 0) {
      if (i != j) throw IoError("off-diagonal entry in equality block");
      if (i % 2 == 0) continue;  // the negated twin of row (i - 1) / 2
      auto& row = form.equalities[(i - 1) / 2];
      if (mat == 0) {
        row.rhs = v;
      } else {
        row.coeffs.emplace_back(mat - 1, v);
      }
      continue;
    }
    if (sizes[blk - 1] < 0 && i != j) throw IoError("off-diagonal entry in diagonal block");
    SdpEntry e;
    e.var = mat == 0 ? kConstantTerm : mat - 1;
    e.row = std::min(i, j) - 1;
    e.col = std::max(i, j) - 1;
    e.value = mat == 0 ? -v : v;
    form.blocks[pos].entries.push_back(e);
  }
  return form;
}

}  // namespace homocp
