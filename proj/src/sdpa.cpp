#include "packbound/sdpa.hpp"

#include "packbound/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace packbound {

namespace {

using Key = std::tuple<int, int, int>;

// Merge duplicates, drop zeros, order by (block, i, j).
std::map<Key, Real> canonical(const std::vector<NumericEntry>& es, bool negate) {
  std::map<Key, Real> m;
  for (const auto& e : es) {
    int i = std::min(e.i, e.j), j = std::max(e.i, e.j);
    auto [it, ins] = m.emplace(Key{e.block, i, j}, negate ? Real(-e.value) : e.value);
    if (!ins) it->second += negate ? Real(-e.value) : e.value;
  }
  for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
  return m;
}

std::string role_token(const NumericBlock& b) {
  if (b.diagonal) return "LP";
  return role_name(b.role);
}

}  // namespace

std::string export_sdpa(const NumericModel& model) {
  PrecisionScope scope(model.precision);
  std::ostringstream out;
  const auto& irr = irreps();
  out << "* packbound model, precision " << model.precision << " bits\n";
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    const auto& blk = model.blocks[b];
    out << "* block " << b + 1 << " " << role_token(blk) << " "
        << (blk.irrep >= 0 ? irr[blk.irrep].name : std::string("-")) << "\n";
  }
  out << model.rows.size() << "\n" << model.blocks.size() << "\n";
  for (std::size_t b = 0; b < model.blocks.size(); ++b)
    out << (b ? " " : "") << (model.blocks[b].diagonal ? -model.blocks[b].size : model.blocks[b].size);
  out << "\n";
  for (std::size_t k = 0; k < model.rhs.size(); ++k) out << (k ? " " : "") << real_str(model.rhs[k]);
  out << "\n";
  auto emit = [&](int matno, const std::map<Key, Real>& m) {
    for (const auto& [key, v] : m)
      out << matno << " " << std::get<0>(key) + 1 << " " << std::get<1>(key) + 1 << " " << std::get<2>(key) + 1 << " "
          << real_str(v) << "\n";
  };
  emit(0, canonical(model.objective, true));
  for (std::size_t k = 0; k < model.rows.size(); ++k) emit(static_cast<int>(k + 1), canonical(model.rows[k], false));
  return out.str();
}

void write_sdpa(const NumericModel& model, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot write " + path);
  f << export_sdpa(model);
  if (!f) throw IoFailure("write failed: " + path);
}

NumericModel import_sdpa(const std::string& text, unsigned precision) {
  PrecisionScope scope(precision);
  NumericModel model;
  model.precision = precision;
  std::istringstream in(text);
  std::string line;
  std::map<int, std::pair<std::string, std::string>> roles;
  std::string body;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '*' || line[0] == '"')) {
      std::istringstream ls(line.substr(1));
      std::string word, role, irrep;
      int idx = 0;
      if (ls >> word && word == "block" && ls >> idx >> role >> irrep) roles[idx - 1] = {role, irrep};
      continue;
    }
    for (char& c : line)
      if (c == '{' || c == '}' || c == ',' || c == '(' || c == ')') c = ' ';
    body += line + "\n";
  }
  std::istringstream tok(body);
  long m = 0, nb = 0;
  if (!(tok >> m >> nb) || m < 0 || nb <= 0) throw IoFailure("SDPA: bad header");
  for (long b = 0; b < nb; ++b) {
    long sz = 0;
    if (!(tok >> sz) || sz == 0) throw IoFailure("SDPA: bad block size");
    NumericBlock blk;
    blk.size = static_cast<int>(sz < 0 ? -sz : sz);
    blk.diagonal = sz < 0;
    auto it = roles.find(static_cast<int>(b));
    if (it != roles.end()) {
      const auto& [role, irrep] = it->second;
      if (role == "S1") blk.role = BlockRole::S1;
      else if (role == "S2") blk.role = BlockRole::S2;
      else blk.role = BlockRole::R;
      if (irrep != "-") blk.irrep = irrep_index(irrep);
      blk.label = blk.diagonal ? "LP slacks" : role + " " + irrep;
    }
    model.blocks.push_back(blk);
  }
  for (long k = 0; k < m; ++k) {
    std::string v;
    if (!(tok >> v)) throw IoFailure("SDPA: truncated cost vector");
    model.rhs.push_back(parse_real(v));
  }
  model.rows.assign(static_cast<std::size_t>(m), {});
  long matno, blk, i, j;
  std::string v;
  while (tok >> matno >> blk >> i >> j >> v) {
    if (matno < 0 || matno > m || blk < 1 || blk > nb) throw IoFailure("SDPA: entry out of range");
    const auto& bd = model.blocks[blk - 1];
    if (i < 1 || j < 1 || i > bd.size || j > bd.size || (bd.diagonal && i != j))
      throw IoFailure("SDPA: entry index out of range");
    NumericEntry e{static_cast<int>(blk - 1), static_cast<int>(std::min(i, j) - 1), static_cast<int>(std::max(i, j) - 1),
                   parse_real(v)};
    if (matno == 0) {
      e.value = -e.value;
      model.objective.push_back(e);
    } else {
      model.rows[matno - 1].push_back(e);
    }
  }
  if (!tok.eof()) throw IoFailure("SDPA: malformed entry line");
  model.row_labels.assign(model.rows.size(), "");
  return model;
}

NumericModel read_sdpa(const std::string& path, unsigned precision) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return import_sdpa(ss.str(), precision);
}

namespace {

struct Node {
  bool leaf = false;
  std::string value;
  std::vector<Node> kids;
};

Node parse_braces(const std::string& s, std::size_t& pos) {
  Node n;
  auto skip = [&] {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ',')) ++pos;
  };
  skip();
  if (pos >= s.size()) throw IoFailure("SDPA solution: unexpected end");
  if (s[pos] != '{') {
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != ',' && s[pos] != '}') ++pos;
    n.leaf = true;
    n.value = s.substr(start, pos - start);
    return n;
  }
  ++pos;
  for (;;) {
    skip();
    if (pos >= s.size()) throw IoFailure("SDPA solution: unbalanced braces");
    if (s[pos] == '}') {
      ++pos;
      return n;
    }
    n.kids.push_back(parse_braces(s, pos));
  }
}

}  // namespace

SolutionBundle import_sdpa_solution(const std::string& text, const NumericModel& model) {
  PrecisionScope scope(model.precision);
  auto at = text.find("yMat");
  if (at == std::string::npos) throw IoFailure("SDPA solution: no yMat section");
  std::size_t pos = text.find('{', at);
  if (pos == std::string::npos) throw IoFailure("SDPA solution: empty yMat");
  Node top = parse_braces(text, pos);
  if (top.kids.size() != model.blocks.size()) throw IoFailure("SDPA solution: block count mismatch");
  SolutionBundle sol;
  sol.precision = model.precision;
  sol.backend = "file";
  sol.status = "imported";
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    const auto& bd = model.blocks[b];
    const Node& nd = top.kids[b];
    if (bd.diagonal) {
      if (nd.kids.size() != static_cast<std::size_t>(bd.size)) throw IoFailure("SDPA solution: LP block size");
      RealMatrix v(bd.size, 1);
      for (int i = 0; i < bd.size; ++i) v(i, 0) = parse_real(nd.kids[i].value);
      sol.blocks.push_back(v);
    } else {
      if (nd.kids.size() != static_cast<std::size_t>(bd.size)) throw IoFailure("SDPA solution: block size");
      RealMatrix mat(bd.size, bd.size);
      for (int i = 0; i < bd.size; ++i) {
        if (nd.kids[i].kids.size() != static_cast<std::size_t>(bd.size)) throw IoFailure("SDPA solution: row size");
        for (int j = 0; j < bd.size; ++j) mat(i, j) = parse_real(nd.kids[i].kids[j].value);
      }
      sol.blocks.push_back(mat);
    }
  }
  auto number_after = [&](const std::string& key, Real& out) {
    auto p = text.find(key);
    if (p == std::string::npos) return;
    p = text.find('=', p);
    if (p == std::string::npos) return;
    std::istringstream ls(text.substr(p + 1, 200));
    std::string v;
    if (ls >> v) out = parse_real(v);
  };
  // SDPA's objectives refer to the maximization of <F0, Y> = -<C, Y>.
  Real pobj = 0, dobj = 0;
  number_after("objValPrimal", pobj);
  number_after("objValDual", dobj);
  sol.primal_objective = -dobj;
  sol.dual_objective = -pobj;
  return sol;
}

}  // namespace packbound
