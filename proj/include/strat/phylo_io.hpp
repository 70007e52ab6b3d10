#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

#include "strat/tree.hpp"

namespace strat {

class phylo_parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ALife community data standard CSV: header
// id,ancestor_list,origin_time,destruction_time with ancestor_list as a
// bracketed id list ("[none]" for roots). Reading validates ids, parent
// links and acyclicity; a multi-root file gains a synthetic root so the
// result is a single tree.
void write_alife_csv(const PhyloTree& tree, std::ostream& out);
void write_alife_csv_file(const PhyloTree& tree, const std::string& path);
PhyloTree read_alife_csv(std::istream& in);
PhyloTree read_alife_csv_file(const std::string& path);

// Newick with branch lengths (child origin_time minus parent origin_time;
// the root carries its own origin_time as length). Labels are quoted when
// they contain metacharacters.
std::string write_newick(const PhyloTree& tree);
PhyloTree read_newick(const std::string& text);
PhyloTree read_newick_file(const std::string& path);

// Robinson-Foulds over nontrivial bipartitions (multifurcations compared
// natively). Returns {distance, normalized similarity}; similarity is 1
// when both trees carry no nontrivial bipartitions. Throws
// std::invalid_argument when leaf label sets differ.
std::pair<std::uint64_t, double> robinson_foulds(const PhyloTree& a,
                                                 const PhyloTree& b);

}  // namespace strat
