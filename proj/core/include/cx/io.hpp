#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cx/map.hpp"
#include "cx/permgroup.hpp"

namespace cx {

// A parsed `.cx` document: named complexes and named maps between them.
// The order vectors record declaration order; writing emits complexes first
// and then maps, each in declaration order with sorted bodies.
struct CxDocument {
  std::vector<std::string> complex_order;
  std::vector<std::string> map_order;
  std::map<std::string, std::shared_ptr<const TwoComplex>> complexes;
  std::map<std::string, ComplexMap> maps;

  std::shared_ptr<const TwoComplex> complex(const std::string& name) const;
  const ComplexMap& map(const std::string& name) const;
};

// Line-oriented format; '#' starts a comment, blank lines separate nothing.
//   complex NAME
//   vertex ID
//   edge ID SRC DST              (declares the darts ID and ID^)
//   face ID W1 W2 ...            (boundary word, tokens `d` or `d^`)
//   map NAME SRC DST
//     v A -> B
//     e d -> d2                  (or `e d -> v:B` when d collapses to B)
//     f F -> G @K                (face image at rotation offset K)
//     f F -> path d1 d2 ...      (or `f F -> path v:B` for the empty path)
// Cell names must not start with "v:", and faces must not be named "path".
CxDocument parse_cx(const std::string& text);
CxDocument parse_cx_file(const std::string& path);

std::string write_cx(const CxDocument& doc);

std::string export_dot(const TwoComplex& x);
// Source and target side by side, source cells tinted by their fiber.
std::string export_dot(const ComplexMap& m);
// Hasse diagram of the subgroup ordering.
std::string export_dot(const SubgroupLattice& l);

// Command line driver; args exclude the program name. Returns 0 on success,
// 1 on a domain error ("error[<code>]: <message>" on err) and 2 on usage
// problems.
int cli(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cx
