#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "forestlab/structure.hpp"
#include "forestlab/system.hpp"

namespace corpus {

struct Entry {
  std::string file;
  std::string query;  // definition naming the tree class
  forestlab::Radius verdict;
};

inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = {
      {"alltrees.fst", "All", forestlab::Radius::SubOne},   {"lin.fst", "Lin", forestlab::Radius::One},
      {"height1.fst", "H", forestlab::Radius::One},         {"binary.fst", "Bin", forestlab::Radius::SubOne},
      {"evenchains.fst", "Even", forestlab::Radius::One},   {"bamboo.fst", "Bamboo", forestlab::Radius::One},
  };
  return all;
}

inline std::string path(const std::string& file) { return std::string(FORESTLAB_CORPUS_DIR) + "/" + file; }

inline std::string read(const std::string& file) {
  std::ifstream in(path(file));
  if (!in) throw std::runtime_error("cannot open corpus file " + file);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline forestlab::ComptonSystem load(const std::string& file) { return forestlab::parse_system(read(file)); }

}  // namespace corpus
