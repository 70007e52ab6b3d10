#include "strat/phylo_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace strat {

namespace {

std::string format_time(double t) {
  if (t == static_cast<double>(static_cast<long long>(t))) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(t));
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", t);
  return buf;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_alife_csv(const PhyloTree& tree, std::ostream& out) {
  // leaves labeled with integer taxon ids keep them as row ids so that a
  // round trip preserves leaf identity; everything else gets fresh ids
  std::vector<long long> id_of(tree.size(), -1);
  std::set<long long> used;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(static_cast<std::int64_t>(i));
    if (!n.children.empty() || n.label.empty()) continue;
    if (n.label.find_first_not_of("0123456789") != std::string::npos) continue;
    try {
      const long long id = std::stoll(n.label);
      if (used.insert(id).second) id_of[i] = id;
    } catch (const std::exception&) {
    }
  }
  long long next = used.empty() ? 0 : *used.rbegin() + 1;
  for (auto& id : id_of) {
    if (id < 0) id = next++;
  }
  out << "id,ancestor_list,origin_time,destruction_time\n";
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(static_cast<std::int64_t>(i));
    out << id_of[i] << ",";
    if (n.parent == kNoParent)
      out << "\"[none]\"";
    else
      out << "\"[" << id_of[static_cast<std::size_t>(n.parent)] << "]\"";
    out << "," << format_time(n.origin_time) << ",inf\n";
  }
}

void write_alife_csv_file(const PhyloTree& tree, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw phylo_parse_error("cannot open for writing: " + path);
  write_alife_csv(tree, out);
}

PhyloTree read_alife_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw phylo_parse_error("alife csv: empty input");
  auto cols = split_csv_row(header);
  const auto col_of = [&](const std::string& name) {
    const auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end())
      throw phylo_parse_error("alife csv: missing column " + name);
    return static_cast<std::size_t>(it - cols.begin());
  };
  const std::size_t id_col = col_of("id");
  const std::size_t anc_col = col_of("ancestor_list");
  const std::size_t time_col = col_of("origin_time");

  struct Row {
    long long id;
    long long parent;  // -1 for none
    double origin;
  };
  std::vector<Row> rows;
  std::set<long long> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_row(line);
    if (f.size() < cols.size())
      throw phylo_parse_error("alife csv: short row: " + line);
    Row r{};
    try {
      r.id = std::stoll(f[id_col]);
      r.origin = std::stod(f[time_col]);
    } catch (const std::exception&) {
      throw phylo_parse_error("alife csv: bad number in row: " + line);
    }
    std::string anc = f[anc_col];
    std::erase_if(anc, [](char c) { return c == '[' || c == ']' || c == ' '; });
    std::transform(anc.begin(), anc.end(), anc.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (anc == "none") {
      r.parent = -1;
    } else if (anc.find(',') != std::string::npos) {
      throw phylo_parse_error("alife csv: multiple ancestors unsupported");
    } else {
      try {
        r.parent = std::stoll(anc);
      } catch (const std::exception&) {
        throw phylo_parse_error("alife csv: bad ancestor_list: " + f[anc_col]);
      }
    }
    if (!ids.insert(r.id).second)
      throw phylo_parse_error("alife csv: duplicate id " + std::to_string(r.id));
    rows.push_back(r);
  }
  if (rows.empty()) throw phylo_parse_error("alife csv: no rows");

  std::map<long long, std::size_t> by_id;
  for (std::size_t i = 0; i < rows.size(); ++i) by_id[rows[i].id] = i;
  std::vector<std::vector<std::size_t>> children(rows.size());
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].parent < 0) {
      roots.push_back(i);
      continue;
    }
    const auto it = by_id.find(rows[i].parent);
    if (it == by_id.end())
      throw phylo_parse_error("alife csv: missing parent id " +
                              std::to_string(rows[i].parent));
    if (it->second == i)
      throw phylo_parse_error("alife csv: node is its own ancestor");
    children[it->second].push_back(i);
  }
  if (roots.empty()) throw phylo_parse_error("alife csv: no root row");

  PhyloTree tree;
  std::vector<std::int64_t> dst(rows.size(), -1);
  std::vector<std::size_t> order;
  if (roots.size() == 1) {
    const auto r = roots.front();
    dst[r] = tree.add_root(rows[r].origin, std::to_string(rows[r].id));
    order.push_back(r);
  } else {
    double t0 = rows[roots.front()].origin;
    for (auto r : roots) t0 = std::min(t0, rows[r].origin);
    tree.add_root(t0);
    for (auto r : roots) {
      dst[r] = tree.add_child(tree.root(), rows[r].origin,
                              std::to_string(rows[r].id));
      order.push_back(r);
    }
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = order[k];
    for (auto c : children[i]) {
      dst[c] = tree.add_child(dst[i], rows[c].origin, std::to_string(rows[c].id));
      order.push_back(c);
    }
  }
  if (order.size() != rows.size())
    throw phylo_parse_error("alife csv: cycle detected");
  // leaf labels are taxon ids; internal labels are not meaningful here
  for (std::size_t i = 0; i < tree.size(); ++i) {
    auto& n = tree.node(static_cast<std::int64_t>(i));
    if (!n.children.empty()) n.label.clear();
  }
  return tree;
}

PhyloTree read_alife_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw phylo_parse_error("cannot open: " + path);
  return read_alife_csv(in);
}

// ------------------------------------------------------------------ newick

namespace {

bool needs_quoting(const std::string& label) {
  if (label.empty()) return false;
  return label.find_first_of(" \t()[]':;,") != std::string::npos;
}

void write_label(std::string& out, const std::string& label) {
  if (!needs_quoting(label)) {
    out += label;
    return;
  }
  out += '\'';
  for (char c : label) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += '\'';
}

void write_node(const PhyloTree& t, std::int64_t i, std::string& out) {
  const auto& n = t.node(i);
  if (!n.children.empty()) {
    out += '(';
    bool first = true;
    for (auto c : n.children) {
      if (!first) out += ',';
      first = false;
      write_node(t, c, out);
    }
    out += ')';
  }
  write_label(out, n.label);
  out += ':';
  const double parent_time =
      n.parent == kNoParent ? 0.0 : t.node(n.parent).origin_time;
  out += format_time(n.origin_time - parent_time);
}

struct NewickParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit NewickParser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw phylo_parse_error("newick: " + why + " at offset " +
                            std::to_string(pos));
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  std::string parse_label() {
    skip_ws();
    std::string label;
    if (peek() == '\'') {
      ++pos;
      while (pos < s.size()) {
        if (s[pos] == '\'') {
          if (pos + 1 < s.size() && s[pos + 1] == '\'') {
            label += '\'';
            pos += 2;
          } else {
            ++pos;
            return label;
          }
        } else {
          label += s[pos++];
        }
      }
      fail("unterminated quoted label");
    }
    while (pos < s.size() &&
           std::string_view("():,;").find(s[pos]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(s[pos]))) {
      label += s[pos++];
    }
    return label;
  }

  double parse_length() {
    skip_ws();
    if (peek() != ':') return 0.0;
    ++pos;
    skip_ws();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      fail("bad branch length");
    }
    pos += used;
    return v;
  }

  // returns (subtree-as-child-list builder) via recursion into `tree`
  std::int64_t parse_node(PhyloTree& tree, std::int64_t parent,
                          double parent_time) {
    skip_ws();
    std::vector<std::size_t> pending;  // placeholder, children attach directly
    (void)pending;
    if (peek() == '(') {
      ++pos;
      // postpone node creation until children are parsed: collect into a
      // temporary tree fragment by first creating the node with a dummy time
      const std::int64_t me = parent == kNoParent
                                  ? tree.add_root(0.0)
                                  : tree.add_child(parent, parent_time);
      while (true) {
        parse_node(tree, me, 0.0);
        skip_ws();
        if (peek() == ',') {
          ++pos;
          continue;
        }
        if (peek() == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
      tree.node(me).label = parse_label();
      const double len = parse_length();
      tree.node(me).origin_time = len;  // fixed up in a second pass
      return me;
    }
    const std::string label = parse_label();
    if (label.empty() && peek() != ':') fail("expected label or '('");
    const std::int64_t me = parent == kNoParent ? tree.add_root(0.0, label)
                                                : tree.add_child(parent, 0.0, label);
    tree.node(me).label = label;
    tree.node(me).origin_time = parse_length();
    return me;
  }
};

void fix_times(PhyloTree& t, std::int64_t i, double parent_time) {
  auto& n = t.node(i);
  n.origin_time += parent_time;  // stored lengths become absolute times
  for (auto c : n.children) fix_times(t, c, n.origin_time);
}

}  // namespace

std::string write_newick(const PhyloTree& tree) {
  if (tree.empty()) return ";";
  std::string out;
  write_node(tree, tree.root(), out);
  out += ';';
  return out;
}

PhyloTree read_newick(const std::string& text) {
  NewickParser p(text);
  PhyloTree tree;
  p.parse_node(tree, kNoParent, 0.0);
  if (p.peek() != ';') p.fail("expected ';'");
  fix_times(tree, tree.root(), 0.0);
  return tree;
}

PhyloTree read_newick_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw phylo_parse_error("cannot open: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_newick(ss.str());
}

// --------------------------------------------------------- robinson-foulds

namespace {

using Split = std::vector<std::uint64_t>;  // leaf-membership bitset

void collect_splits(const PhyloTree& t,
                    const std::map<std::string, std::size_t>& leaf_index,
                    std::set<Split>* out) {
  const std::size_t n = leaf_index.size();
  const std::size_t words = (n + 63) / 64;
  std::vector<Split> clade(t.size(), Split(words, 0));
  std::vector<std::size_t> weight(t.size(), 0);
  // children precede parents nowhere in general: do a post-order walk
  std::vector<std::int64_t> order;
  std::vector<std::int64_t> stack{t.root()};
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    order.push_back(i);
    for (auto c : t.node(i).children) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto i = *it;
    const auto& nd = t.node(i);
    auto& bits = clade[static_cast<std::size_t>(i)];
    if (nd.children.empty()) {
      const auto pos = leaf_index.at(nd.label);
      bits[pos / 64] |= std::uint64_t{1} << (pos % 64);
      weight[static_cast<std::size_t>(i)] = 1;
    } else {
      for (auto c : nd.children) {
        const auto& cb = clade[static_cast<std::size_t>(c)];
        for (std::size_t w = 0; w < words; ++w) bits[w] |= cb[w];
        weight[static_cast<std::size_t>(i)] +=
            weight[static_cast<std::size_t>(c)];
      }
      const std::size_t k = weight[static_cast<std::size_t>(i)];
      if (i != t.root() && k >= 2 && k <= n - 2) {
        Split s = bits;
        if (s[0] & 1) {  // canonicalize against the complement
          for (std::size_t w = 0; w < words; ++w) s[w] = ~s[w];
          const std::size_t tail = n % 64;
          if (tail != 0) s[words - 1] &= (std::uint64_t{1} << tail) - 1;
        }
        out->insert(std::move(s));
      }
    }
  }
}

}  // namespace

std::pair<std::uint64_t, double> robinson_foulds(const PhyloTree& a,
                                                 const PhyloTree& b) {
  const auto la = a.leaf_labels();
  const auto lb = b.leaf_labels();
  if (la != lb)
    throw std::invalid_argument("robinson_foulds: leaf label sets differ");
  std::map<std::string, std::size_t> leaf_index;
  for (std::size_t i = 0; i < la.size(); ++i) leaf_index[la[i]] = i;

  std::set<Split> sa, sb;
  collect_splits(a, leaf_index, &sa);
  collect_splits(b, leaf_index, &sb);

  std::uint64_t diff = 0;
  for (const auto& s : sa) diff += !sb.count(s);
  for (const auto& s : sb) diff += !sa.count(s);
  const std::uint64_t max_diff = sa.size() + sb.size();
  const double similarity =
      max_diff == 0 ? 1.0 : 1.0 - static_cast<double>(diff) / max_diff;
  return {diff, similarity};
}

}  // namespace strat
