#pragma once

#include <random>
#include <string>
#include <vector>

#include "tomq/dl.hpp"
#include "tomq/io.hpp"
#include "tomq/temporal.hpp"

namespace tomq::test {

inline Ontology onto(const std::string& dialect, const std::vector<std::string>& lines) {
  std::string text = "dialect: " + dialect + "\n";
  for (const auto& l : lines) text += l + "\n";
  return parse_ontology(text);
}

inline Eliq q(const std::string& s) { return parse_eliq(s); }

inline PathQuery pq(const std::string& s) { return parse_pathquery(s); }

inline DataInstance inst(const std::string& atoms, const std::string& point = "a") {
  return parse_pointed("point: " + point + "\nt=0: " + atoms + "\n").instance;
}

// Slices written as atom lists, "-" for the empty slice.
inline TemporalInstance tinst(const std::vector<std::string>& slices, const std::string& point = "a") {
  std::string text = "point: " + point + "\n";
  for (size_t t = 0; t < slices.size(); ++t) text += "t=" + std::to_string(t) + ": " + slices[t] + "\n";
  TemporalInstance d = parse_tinstance(text);
  return d;
}

// Random ELIQ over the given names with at most `size` atoms.
inline Eliq random_eliq(std::mt19937& rng, const std::vector<std::string>& concepts,
                        const std::vector<std::string>& roles, int size, bool inverse = true) {
  Eliq out;
  std::uniform_int_distribution<int> coin(0, 2);
  while (size > 0) {
    if (roles.empty() || coin(rng) < 2 || size == 1) {
      out.concepts.push_back(concepts[rng() % concepts.size()]);
      size -= 1;
    } else {
      int sub = static_cast<int>(rng() % static_cast<unsigned>(size));
      Role r{roles[rng() % roles.size()], inverse && (rng() % 2 == 0)};
      out.edges.push_back({r, random_eliq(rng, concepts, roles, sub, inverse)});
      size -= 1 + sub;
      if (coin(rng) == 0) break;
    }
  }
  out.canonicalize();
  return out;
}

}  // namespace tomq::test
