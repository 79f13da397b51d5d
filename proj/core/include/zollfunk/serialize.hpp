#pragma once

#include <iosfwd>
#include <string>

#include "zollfunk/solver.hpp"

namespace zollfunk {

// JSON schemas carry a "schema" tag; CSV files carry a header row.
// Floating-point round trips are exact (shortest-representation printing).

std::string to_json(const HarmonicField& f);
HarmonicField harmonic_field_from_json(const std::string& text);

std::string to_json(const DirectionGrid& grid);

/// Graph fields serialize per-rep chart modes plus the global product-basis
/// coefficients so both representations reload exactly.
std::string to_json(const EquatorFamily& fam, const TangentGraphField& phi);
TangentGraphField tangent_field_from_json(const EquatorFamily& fam, const std::string& text);

std::string to_json(const EquatorFamily& fam, const ZollState& state);
ZollState zoll_state_from_json(const EquatorFamily& fam, const std::string& text);

/// Family parameters embedded in state files; used to rebuild the context.
struct FamilyParams {
  int n = 2, L = 8, Lg = 12, Q = 64, chart_band = 14;
};
FamilyParams family_params_from_json(const std::string& text);

std::string report_to_json(const ZollReport& rep);

/// KernelMatrix dump: header then one "i,j,value" row per entry (diagonal
/// rows carry the extrapolated smooth kernel value).
void write_kernel_csv(std::ostream& os, const KernelMatrix& M);

void write_iteration_csv_header(std::ostream& os);
void write_iteration_csv_row(std::ostream& os, int iter, const LambdaValue& lam);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace zollfunk
