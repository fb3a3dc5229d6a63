#pragma once

#include <string>
#include <vector>

#include "surfoffset/metrics.hpp"
#include "surfoffset/morphology.hpp"

namespace surfoffset {

// Lifted offset polylines as OBJ v/l records.
void write_offset_obj(const std::string& path, const OffsetResult& offset);

// 3D polyline as OBJ v/l records (geodesic paths).
void write_polyline_obj(const std::string& path,
                        const std::vector<SurfacePoint>& polyline);

// Parameter-domain picture: source curves and offset polylines; pass a
// LabeledMesh to also color Voronoi cells and stroke the bisectors.
void write_offset_svg(const std::string& path, const Surface& surface,
                      const std::vector<SourceCurve>& curves,
                      const OffsetResult* offset, const LabeledMesh* labeled);

// Deterministic run document: inputs echo plus offset polylines in both
// domains with per-vertex site provenance. Never includes timings.
std::string offset_result_json(const Surface& surface,
                               const std::vector<SourceCurve>& curves,
                               const RunOptions& options, const OffsetResult& offset);

std::string geodesic_result_json(const Surface& surface, ParamPoint a, ParamPoint b,
                                 const GeodesicRunResult& run);

// Diagnostic document for exit-code-3 failures.
std::string diagnostics_json(const std::string& failure,
                             const std::vector<int>& violating_edges,
                             const IntrinsicMesh* mesh, int non_converged);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace surfoffset
