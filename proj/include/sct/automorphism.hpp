#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sct/graph.hpp"

namespace sct {

// Label-preserving graph map, indexed by global vertex/dart id; entries
// outside the mapped component are -1.
struct Automorphism {
  std::vector<int> vertex;
  std::vector<int> dart;
  bool is_identity() const;
};

struct AutomorphismGroup {
  int component = -1;
  std::vector<int> vertices;
  std::vector<Automorphism> elements;  // identity first; possibly truncated
  std::vector<Automorphism> generators;
  std::size_t order = 1;
  bool complete = true;  // false if elements were truncated at the cap
};

// Every label-preserving automorphism of one component. Reduced components
// are handled by base-vertex extension; others by bounded backtracking.
AutomorphismGroup automorphisms(const LabelledGraph& g, int component, std::size_t max_elements = 4096);

// Label-preserving isomorphism from component a onto component b.
std::optional<Automorphism> component_isomorphism(const LabelledGraph& g, int a, int b);

bool is_label_preserving_automorphism(const LabelledGraph& g, const Automorphism& phi);
Automorphism compose(const Automorphism& f, const Automorphism& g);  // f after g

// Orbits of Aut(G) on vertices, where automorphisms may permute isomorphic
// components.
struct OrbitPartition {
  std::vector<int> cls;     // orbit id per vertex
  std::size_t count = 0;
  bool identical_components = false;  // some two components are isomorphic
  std::vector<int> iso_class;         // per component
};
OrbitPartition vertex_orbits(const LabelledGraph& g);

// Vertex order and label of a component in which every vertex has degree 2.
struct CycleComponent {
  std::vector<int> vertices;  // v_0 .. v_{L-1}
  std::vector<int> darts;     // darts[i] : v_i -> v_{i+1}
  Word label;
};
std::optional<CycleComponent> as_cycle(const LabelledGraph& g, const std::vector<int>& comp_vertices);

}  // namespace sct
