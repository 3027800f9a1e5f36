#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "coherentfl/errors.hpp"

namespace coherentfl {

// How the downlink spends its slots: dedicated pilots (Conventional), pilots
// multiplying a parameter payload (ProductSuperposition), or pilots added on
// top of one (AdditiveSuperposition).
enum class Scheme { Conventional, ProductSuperposition, AdditiveSuperposition };

// How an estimating device completes the entries it never received:
// ZF zero-fills, PLMF substitutes its own previous local model.
enum class FillStrategy { ZF, PLMF };

struct RoundTrace {
  std::int64_t round = 0;
  double global_loss = 0.0;
  double grad_norm_sq = 0.0;
  double model_diff_sq = 0.0;  // ||theta(t) - theta(t-1)||^2, 0 at round 0
  double test_accuracy = 0.0;
  double comm_cost_slots = 0.0;
  double lambda = 0.0;
};

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Conventional: return "conventional";
    case Scheme::ProductSuperposition: return "product";
    case Scheme::AdditiveSuperposition: return "additive";
  }
  return "unknown";
}

inline const char* fill_name(FillStrategy f) {
  return f == FillStrategy::ZF ? "zf" : "plmf";
}

inline Scheme parse_scheme(const std::string& s) {
  if (s == "conventional") return Scheme::Conventional;
  if (s == "product") return Scheme::ProductSuperposition;
  if (s == "additive") return Scheme::AdditiveSuperposition;
  throw ConfigError("unknown scheme '" + s +
                    "' (expected conventional, product, or additive)");
}

inline FillStrategy parse_fill(const std::string& s) {
  if (s == "zf") return FillStrategy::ZF;
  if (s == "plmf") return FillStrategy::PLMF;
  throw ConfigError("unknown fill strategy '" + s + "' (expected zf or plmf)");
}

// Shortest round-trippable decimal; locale-independent '.' decimal point.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline const char* trace_csv_header() {
  return "round,global_loss,grad_norm_sq,test_accuracy,comm_cost_slots,lambda,"
         "scheme,fill_strategy,seed";
}

inline std::string trace_csv_row(const RoundTrace& t, Scheme scheme, FillStrategy fill,
                                 std::uint64_t seed) {
  std::string row;
  row += std::to_string(t.round);
  row += ',';
  row += format_number(t.global_loss);
  row += ',';
  row += format_number(t.grad_norm_sq);
  row += ',';
  row += format_number(t.test_accuracy);
  row += ',';
  row += format_number(t.comm_cost_slots);
  row += ',';
  row += format_number(t.lambda);
  row += ',';
  row += scheme_name(scheme);
  row += ',';
  row += fill_name(fill);
  row += ',';
  row += std::to_string(seed);
  return row;
}

}  // namespace coherentfl
