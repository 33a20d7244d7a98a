#pragma once

#include <functional>
#include <string>
#include <variant>

#include "mmo/linalg.hpp"

namespace mmo {

// A scalar function of the MSE diagonal (Case 7) or of the squared diagonal of
// the MSE Cholesky factor (Case 8). Minimisation sense.
struct ScalarFn {
  std::string name;
  std::function<double(const RVector&)> fn;
};

enum class AdditiveSchur { Concave, Convex };
enum class MultiplicativeSchur { Concave, Convex };

// -log|M + N|
struct Case1 { CMatrix n; };
// -log|A^H M A + I|
struct Case2 { CMatrix a; };
// Tr[(M + N)^{-1}]
struct Case3 { CMatrix n; };
// Tr[((M + N) (x) M2)^{-1}]
struct Case4 { CMatrix n; CMatrix m; };
// log|A^H (M + I)^{-1} A + N|
struct Case5 { CMatrix a; CMatrix n; };
// Tr[A^H (M + I)^{-1} A]
struct Case6 { CMatrix a; };
// f(d[(M + I)^{-1}])
struct Case7 { AdditiveSchur schur; ScalarFn f; };
// f(d^2[L]), L L^H = (M + I)^{-1}
struct Case8 { MultiplicativeSchur schur; ScalarFn f; };

using ObjectiveCase = std::variant<Case1, Case2, Case3, Case4, Case5, Case6, Case7, Case8>;

inline int case_number(const ObjectiveCase& c) { return static_cast<int>(c.index()) + 1; }

}  // namespace mmo
