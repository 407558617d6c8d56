#pragma once

#include "cx/complex.hpp"

namespace cx {

// Elementary homotopy moves on paths. A spur is a dart immediately followed
// by its inverse. Face moves insert or delete one full traversal of a face
// boundary word, read from a chosen starting position of the stored word.
struct HomotopyMove {
  enum Kind { SpurInsert, SpurDelete, FaceInsert, FaceDelete } kind;
  std::size_t pos = 0;   // index into the dart sequence where the move acts
  Name dart;             // SpurInsert: the dart d of the inserted d, d^
  Name face;             // Face moves: face name, canonical or inverse
  std::size_t bpos = 0;  // Face moves: starting position in the boundary word

  bool operator==(const HomotopyMove&) const = default;
};

struct HomotopyVerdict {
  enum Status { Proven, Refuted, Inconclusive } status;
  std::vector<HomotopyMove> moves;  // Proven: replays input into output
  std::string reason;               // Refuted / Inconclusive

  bool proven() const { return status == Proven; }
};

// Deletes spurs until none remain. Exact for graphs: reduced representatives
// of path homotopy classes with fixed endpoints are unique.
Path reduce_path(const Graph& g, const Path& p);

Path apply_move(const TwoComplex& x, const Path& p, const HomotopyMove& m);

// All moves legal on p within the length bound, in a deterministic order.
std::vector<HomotopyMove> legal_moves(const TwoComplex& x, const Path& p,
                                      std::size_t max_len);

// Bounded search for a homotopy from p to q. For faceless complexes the
// answer is exact (compare reduced forms); otherwise a breadth-first search
// over elementary moves, capped by intermediate path length and move count.
HomotopyVerdict homotopic_bounded(const TwoComplex& x, const Path& p, const Path& q,
                                  std::size_t max_len = 64, std::size_t max_moves = 16);

}  // namespace cx
