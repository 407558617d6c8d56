#include "cx/homotopy.hpp"

#include <algorithm>
#include <deque>

namespace cx {

namespace {

Name vertex_at(const Graph& g, const Path& p, std::size_t pos) {
  return pos == 0 ? p.start : g.dart_dst(p.darts[pos - 1]);
}

void require_valid(const Graph& g, const Path& p, const char* who) {
  if (!g.path_valid(p))
    fail(Errc::UsageError, std::string(who) + ": path is not incident in the graph");
}

}  // namespace

Path reduce_path(const Graph& g, const Path& p) {
  require_valid(g, p, "reduce_path");
  std::vector<Name> stack;
  for (const Name& d : p.darts) {
    if (!stack.empty() && stack.back() == inverse(d))
      stack.pop_back();
    else
      stack.push_back(d);
  }
  return Path{p.start, std::move(stack)};
}

Path apply_move(const TwoComplex& x, const Path& p, const HomotopyMove& m) {
  const Graph& g = x.skel;
  require_valid(g, p, "apply_move");
  Path out = p;
  switch (m.kind) {
    case HomotopyMove::SpurInsert: {
      if (m.pos > p.darts.size())
        fail(Errc::IllegalMove, "spur insertion past the end of the path");
      if (!g.has_dart(m.dart))
        fail(Errc::IllegalMove, "spur insertion of unknown dart '" + m.dart + "'");
      if (g.dart_src(m.dart) != vertex_at(g, p, m.pos))
        fail(Errc::IllegalMove, "spur dart does not start at the insertion vertex");
      out.darts.insert(out.darts.begin() + m.pos, {m.dart, inverse(m.dart)});
      return out;
    }
    case HomotopyMove::SpurDelete: {
      if (m.pos + 1 >= p.darts.size())
        fail(Errc::IllegalMove, "spur deletion past the end of the path");
      if (p.darts[m.pos + 1] != inverse(p.darts[m.pos]))
        fail(Errc::IllegalMove, "no spur at position " + std::to_string(m.pos));
      out.darts.erase(out.darts.begin() + m.pos, out.darts.begin() + m.pos + 2);
      return out;
    }
    case HomotopyMove::FaceInsert: {
      std::vector<Name> w = x.boundary(m.face);
      if (m.bpos >= w.size())
        fail(Errc::IllegalMove, "face boundary position out of range");
      if (m.pos > p.darts.size())
        fail(Errc::IllegalMove, "face insertion past the end of the path");
      std::rotate(w.begin(), w.begin() + m.bpos, w.end());
      if (g.dart_src(w.front()) != vertex_at(g, p, m.pos))
        fail(Errc::IllegalMove, "face boundary does not start at the insertion vertex");
      out.darts.insert(out.darts.begin() + m.pos, w.begin(), w.end());
      return out;
    }
    case HomotopyMove::FaceDelete: {
      std::vector<Name> w = x.boundary(m.face);
      if (m.bpos >= w.size())
        fail(Errc::IllegalMove, "face boundary position out of range");
      std::rotate(w.begin(), w.begin() + m.bpos, w.end());
      if (m.pos + w.size() > p.darts.size())
        fail(Errc::IllegalMove, "face deletion past the end of the path");
      for (std::size_t i = 0; i < w.size(); ++i)
        if (p.darts[m.pos + i] != w[i])
          fail(Errc::IllegalMove,
               "face boundary does not occur verbatim at position " +
                   std::to_string(m.pos));
      out.darts.erase(out.darts.begin() + m.pos,
                      out.darts.begin() + m.pos + w.size());
      return out;
    }
  }
  fail(Errc::IllegalMove, "unknown move kind");
}

std::vector<HomotopyMove> legal_moves(const TwoComplex& x, const Path& p,
                                      std::size_t max_len) {
  const Graph& g = x.skel;
  std::vector<HomotopyMove> out;
  const std::size_t n = p.darts.size();

  for (std::size_t i = 0; i + 1 < n; ++i)
    if (p.darts[i + 1] == inverse(p.darts[i]))
      out.push_back({HomotopyMove::SpurDelete, i, "", "", 0});

  std::vector<Name> faces = x.all_face_names();
  for (const Name& f : faces) {
    std::vector<Name> w = x.boundary(f);
    if (w.size() > n) continue;
    for (std::size_t b = 0; b < w.size(); ++b) {
      for (std::size_t i = 0; i + w.size() <= n; ++i) {
        bool match = true;
        for (std::size_t j = 0; j < w.size() && match; ++j)
          match = p.darts[i + j] == w[(b + j) % w.size()];
        if (match) out.push_back({HomotopyMove::FaceDelete, i, "", f, b});
      }
    }
  }

  if (n + 2 <= max_len) {
    for (std::size_t i = 0; i <= n; ++i) {
      Name at = vertex_at(g, p, i);
      for (const Name& d : g.darts_at(at))
        out.push_back({HomotopyMove::SpurInsert, i, d, "", 0});
    }
  }
  for (const Name& f : faces) {
    std::vector<Name> w = x.boundary(f);
    if (n + w.size() > max_len) continue;
    for (std::size_t b = 0; b < w.size(); ++b) {
      Name need = g.dart_src(w[b]);
      for (std::size_t i = 0; i <= n; ++i)
        if (vertex_at(g, p, i) == need)
          out.push_back({HomotopyMove::FaceInsert, i, "", f, b});
    }
  }
  return out;
}

HomotopyVerdict homotopic_bounded(const TwoComplex& x, const Path& p, const Path& q,
                                  std::size_t max_len, std::size_t max_moves) {
  const Graph& g = x.skel;
  require_valid(g, p, "homotopic_bounded");
  require_valid(g, q, "homotopic_bounded");
  if (p.start != q.start || g.path_end(p) != g.path_end(q))
    fail(Errc::EndpointMismatch, "paths must share both endpoints");

  if (x.faces.empty()) {
    // Exact in a graph: compare reduced forms, certificate by replaying the
    // spur deletions of p and undoing those of q.
    auto deletions = [&](Path cur) {
      std::vector<HomotopyMove> ms;
      for (;;) {
        bool hit = false;
        for (std::size_t i = 0; i + 1 < cur.darts.size(); ++i) {
          if (cur.darts[i + 1] == inverse(cur.darts[i])) {
            HomotopyMove m{HomotopyMove::SpurDelete, i, "", "", 0};
            cur = apply_move(x, cur, m);
            ms.push_back(m);
            hit = true;
            break;
          }
        }
        if (!hit) return std::make_pair(cur, ms);
      }
    };
    auto [rp, mp] = deletions(p);
    auto [rq, mq] = deletions(q);
    if (rp.darts != rq.darts)
      return {HomotopyVerdict::Refuted, {},
              "reduced forms differ and the complex has no faces"};
    HomotopyVerdict v{HomotopyVerdict::Proven, mp, ""};
    // Undo q's deletions in reverse: insert the dart that was deleted.
    std::vector<HomotopyMove> undo;
    Path cur = q;
    std::vector<Name> deleted;
    for (const HomotopyMove& m : mq) {
      deleted.push_back(cur.darts[m.pos]);
      cur = apply_move(x, cur, m);
    }
    for (std::size_t i = mq.size(); i-- > 0;)
      undo.push_back({HomotopyMove::SpurInsert, mq[i].pos, deleted[i], "", 0});
    v.moves.insert(v.moves.end(), undo.begin(), undo.end());
    return v;
  }

  if (p.darts == q.darts) return {HomotopyVerdict::Proven, {}, ""};

  // Breadth-first search over elementary moves. A hard cap on explored
  // states keeps hostile bounds from exhausting memory.
  constexpr std::size_t kStateCap = 200000;
  std::map<std::vector<Name>, std::pair<std::vector<Name>, HomotopyMove>> parent;
  std::map<std::vector<Name>, std::size_t> depth;
  std::deque<std::vector<Name>> queue;
  depth[p.darts] = 0;
  queue.push_back(p.darts);
  while (!queue.empty()) {
    std::vector<Name> cur = queue.front();
    queue.pop_front();
    std::size_t d = depth.at(cur);
    if (d >= max_moves) continue;
    Path cp{p.start, cur};
    for (const HomotopyMove& m : legal_moves(x, cp, max_len)) {
      Path next = apply_move(x, cp, m);
      if (depth.count(next.darts)) continue;
      depth[next.darts] = d + 1;
      parent[next.darts] = {cur, m};
      if (next.darts == q.darts) {
        std::vector<HomotopyMove> moves;
        std::vector<Name> at = next.darts;
        while (at != p.darts) {
          auto& [prev, mv] = parent.at(at);
          moves.push_back(mv);
          at = prev;
        }
        std::reverse(moves.begin(), moves.end());
        return {HomotopyVerdict::Proven, std::move(moves), ""};
      }
      if (depth.size() > kStateCap)
        return {HomotopyVerdict::Inconclusive, {},
                "state cap exhausted before the move bound"};
      queue.push_back(next.darts);
    }
  }
  return {HomotopyVerdict::Inconclusive, {},
          "no homotopy within max_len=" + std::to_string(max_len) +
              ", max_moves=" + std::to_string(max_moves)};
}

}  // namespace cx
