#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

#include "sct/dehn.hpp"
#include "sct/graph.hpp"

namespace sct {

using Rational = boost::multiprecision::cpp_rational;

// Exact constants of the acylindricity and invariant bounds.
struct GeometryConstants {
  Rational epsilon, p, delta, L_S;
  Rational L, N;
  Rational inj_lower;  // delta / N
  Rational nu_upper;   // N (2 + L / delta)
  Rational A_upper;    // 10 L_S^2 N^3 (L + 5 delta)
  Rational L_of(const Rational& d) const { return L + 4 * d + 100 * delta; }
  Rational N_of(const Rational& d) const { return (d / (5 * delta) + 3) * N; }
  std::vector<std::string> notes;
};
GeometryConstants constants(const Rational& epsilon, const Rational& p, const Rational& delta = 80,
                            const Rational& L_S = 500);
std::string to_string(const Rational& r);
nlohmann::json to_json(const GeometryConstants& c);

// Ball of radius R about the identity in Cay(G, S); vertices are identified
// with Dehn's algorithm, so the presentation must be C'(1/6).
struct CayleyBall {
  std::size_t radius = 0;
  bool complete = true;  // false when the vertex cap stopped the search
  std::size_t generators = 0;
  std::vector<Word> rep;  // shortlex-least geodesic word per vertex
  std::vector<int> dist;
  // adj[v][2g] follows generator g, adj[v][2g+1] its inverse; -1 outside the ball.
  std::vector<std::vector<int>> adj;

  std::size_t size() const { return rep.size(); }
  static std::size_t slot(Letter x) { return 2 * static_cast<std::size_t>(generator_of(x)) + (x < 0 ? 1 : 0); }
  int step(int v, Letter x) const { return adj[v][slot(x)]; }
};

// Ball plus the solver and the invariant index used to identify elements.
// Keys combine the abelianization (reduced modulo the relation lattice) with
// images in a few permutation quotients found by random search.
class BallContext {
 public:
  BallContext(const Presentation& pres, std::size_t radius, std::size_t vertex_cap, std::uint64_t seed = 1);
  const CayleyBall& ball() const { return ball_; }
  const DehnSolver& solver() const { return solver_; }
  const Presentation& presentation() const { return solver_.presentation(); }
  // Vertex of the element represented by w; -1 when it lies outside the ball.
  // Only vertices with distance in [lo, hi] are considered.
  int locate(const Word& w, int lo = 0, int hi = -1) const;
  // Equal keys for equal elements.
  std::uint64_t key(const Word& w) const { return key(invariant(w)); }
  std::size_t quotient_count() const { return quotients_.size(); }

  // Images in the abelianization and the permutation quotients; multiplicative,
  // so keys of products come from stored factors.
  struct Invariant {
    std::vector<std::int64_t> ab;
    std::vector<int> perm;  // quotient images concatenated: point i maps to perm[i]
  };
  Invariant invariant(const Word& w) const;
  Invariant multiply(const Invariant& x, const Invariant& y) const;
  Invariant invert(const Invariant& x) const;
  std::uint64_t key(const Invariant& x) const;
  const Invariant& vertex_invariant(int v) const { return vinv_[static_cast<std::size_t>(v)]; }

  // locate with a precomputed key.
  int locate_keyed(std::uint64_t k, const Word& w, int lo, int hi) const;

 private:
  DehnSolver solver_;
  Abelianization ab_;
  std::vector<std::vector<std::vector<int>>> quotients_;  // per quotient, per generator: permutation
  CayleyBall ball_;
  std::unordered_map<std::uint64_t, std::vector<int>> index_;
  std::vector<Invariant> vinv_;
  std::vector<std::vector<int>> inverse_perms_;  // per quotient, per generator
  std::size_t points_ = 0;                       // sum of quotient degrees
};

CayleyBall cayley_ball(const Presentation& pres, std::size_t radius, std::size_t vertex_cap = 200000);

// Image of a relator cycle in the ball. `vertices[i]` is the vertex reached after
// reading i letters from the base (-1 outside the ball); `full` when all are inside.
struct RelatorCopy {
  int relator = 0;
  std::vector<int> vertices;
  bool full = false;
  std::vector<int> inside() const;
};

struct RelatorEmbedding {
  std::vector<RelatorCopy> copies;   // lying entirely inside the ball
  std::vector<RelatorCopy> partial;  // meeting the ball but leaving it
  std::vector<std::string> notes;
  std::size_t max_diameter = 0;  // max over relators of floor(|r| / 2)
};
// All copies of the relator cycles meeting the ball; full copies are checked
// to be injective on vertices. A copy is a relator read from a base vertex,
// up to the period of a proper power.
RelatorEmbedding embed_relators(const BallContext& ctx);

struct ConeOffBall {
  const BallContext* ctx = nullptr;
  const RelatorEmbedding* relators = nullptr;
  std::vector<std::vector<int>> adj;  // Cayley edges plus relator cliques
  std::size_t clique_edges = 0;
  std::size_t D = 1;  // a cone-off edge moves Cayley distance by at most D
  // Least number of edges from v to a vertex outside the ball: one more than
  // the distance to the vertices with an edge leaving the ball.
  std::vector<int> exit;

  // Paths leaving the ball from x and returning to y have at least this many edges.
  std::size_t exit_bound(int x, int y) const;
  std::vector<int> bfs(int src, int max_depth = -1) const;
  std::vector<int> geodesic(int x, int y) const;  // BFS parents, least index first
};
ConeOffBall coneoff_ball(const BallContext& ctx, const RelatorEmbedding& rel);

struct TriangleWitness {
  int x = -1, y = -1, z = -1;
  std::vector<int> side_xy, side_yz, side_zx;
  int slimness = 0;
};
struct SlimnessReport {
  std::size_t samples_requested = 0, trusted = 0, attempts = 0;
  std::size_t distinct = 0;  // distinct vertex triples among the trusted samples
  int max_slimness = 0;
  std::vector<TriangleWitness> worst;  // triangles attaining the maximum (up to 5)
  std::vector<int> histogram;          // count per slimness value
};
// Triangles whose three pairwise distances are within the exit bound, so the
// BFS sides are geodesics of the cone-off space. Distances from side points to
// the other sides are measured in the ball and bound the true values above.
SlimnessReport sample_slimness(const ConeOffBall& cball, std::size_t samples, std::uint64_t seed,
                               std::size_t max_attempts = 0);
int triangle_slimness(const ConeOffBall& cball, const std::vector<int>& a, const std::vector<int>& b,
                      const std::vector<int>& c);

// Full relator copies that share a vertex.
std::vector<std::vector<int>> intersection_graph(const RelatorEmbedding& rel);

struct GeodesicSequences {
  std::vector<std::vector<int>> chains;  // copy indices; all shortest chains up to the cap
  std::size_t length = 0;                // relators per chain, 0 if none found
  bool trusted = false;  // no shorter chain can use copies outside the ball
  bool truncated = false;
};
GeodesicSequences geodesic_sequences(const ConeOffBall& cball, int a, int b, std::size_t cap = 64);

struct PropertyReport {
  std::size_t checked = 0;
  std::size_t counterexamples = 0;
  std::vector<std::string> details;  // first few counterexamples verbatim
  bool passed() const { return counterexamples == 0; }
};
// Triples and 4-cycles of full copies within Cayley distance `trusted_radius`
// of the root.
PropertyReport check_chords(const ConeOffBall& cball, std::size_t trusted_radius);
// Every Cayley geodesic between two vertices of the union of a chain stays in
// the union (vertex and edge sets). Pairs whose geodesics could leave the ball
// are skipped and not counted.
PropertyReport check_convexity(const ConeOffBall& cball, const std::vector<int>& chain);

struct Classification {
  std::string kind;  // "elliptic", "hyperbolic-indication", "inconclusive"
  Word witness;      // conjugate whose powers all label paths in the graph
  Word conjugator;
  std::size_t power = 1;
  int vertex = -1;              // start of the closed path labelled witness^period
  std::size_t period = 0;
  std::vector<int> power_lengths;  // cone-off length of w^k, k = 1.., while inside the ball
  std::string note;
};
// Bounded search over conjugators of length <= conj_len and powers <= power_cap.
// The labelled graph is the relator graph; `pres` drives Dehn reduction of
// the conjugates; cball (optional) measures growth of w^k.
Classification classify_element(const LabelledGraph& g, const Presentation& pres, const Word& w,
                                std::size_t power_cap, const ConeOffBall* cball = nullptr,
                                std::size_t conj_len = 2);

struct TorsionWitness {
  Word word;
  std::size_t order = 1;       // order of the automorphism on the component
  std::vector<int> path;       // darts from v to phi(v)
  bool closes = false;         // word^order labels a closed path at v
};
// phi maps vertices of g; it must be a label-preserving automorphism of the
// component of v (other vertices are ignored).
TorsionWitness torsion_from_automorphism(const LabelledGraph& g, const std::vector<int>& phi, int v);

}  // namespace sct
