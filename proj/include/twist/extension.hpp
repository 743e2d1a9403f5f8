#pragma once

#include "twist/model.hpp"

namespace tw {

struct ExtensionOptions {
  // Number of direct-limit levels; < 0 picks enough to cover the window.
  long levels = -1;
  // Z_i enters level m as Z_i^{scale * m}. Anything but 1 breaks the
  // connecting-map compatibility and serves as a negative control.
  long z_exponent_scale = 1;
};

// The direct limit realized on the signed lattice: copy m of H sits at the
// degrees n >= -m s, where s is the offset of Phi, and psi_0 is the inclusion
// of the unsigned lattice.
struct ExtensionResult {
  TwistedTuple extended;      // level-assembled operators
  TwistedTuple continuation;  // the same formulas read on all of Z^r
  GradedSpace base_space;
  IndexSet phi_coords;
  Degree phi_offset;
  long levels = 0;
  std::vector<std::string> log;
  // Filled by extend_commutative_lattice.
  bool has_level_checks = false;
  CheckReport intertwining{"level-intertwining"};
  CheckReport coisometry_hypothesis{"coisometry-hypothesis"};
};

// Extends a doubly twisted isometric tuple with one-dimensional fibers. The
// connecting map is Phi = prod of the non-coisometric coordinates, which must
// be a single lattice term.
ExtensionResult extend_doubly_twisted_isometries(const TwistedTuple& t, long N, const ExtensionOptions& opt = {});

// Extension of a Fock model over a commutative algebra along the untwisted
// diagonal shift, with level tuples M_{m,i} = M_{A,i} Z_i^m. Level checks run
// for m <= n <= level_checks.
ExtensionResult extend_commutative_lattice(const FockModel& fm, long N, long level_checks = 3,
                                           const ExtensionOptions& opt = {});

struct ExtensionReport {
  CheckReport restriction{"restriction"};
  CheckReport unitary{"unitary"};
  CheckReport relations{"relations"};  // twisted and doubly twisted together
  CheckReport twisted{"twisted"};
  CheckReport doubly_twisted{"doubly-twisted"};
  CheckReport sigma{"sigma"};
  CheckReport continuation{"continuation"};
  CheckReport minimality{"minimality"};
  // Unitary and twisted on the window imply doubly twisted on the window.
  bool implication_holds = true;
  bool pass = true;
  std::vector<std::string> notes;
};

ExtensionReport verify_extension(const ExtensionResult& res, const TwistedTuple& original, long N, double tol);

// The operator read on Z^r: the same terms over the signed space. With
// keep_unsigned_drops, terms also get the guards that reproduce the
// truncation at the boundary of Z_+^r.
LatticeOperator signed_continuation(const LatticeOperator& op, bool keep_unsigned_drops);

// Largest coordinate offset over all terms.
long reach(const LatticeOperator& op);

}  // namespace tw
