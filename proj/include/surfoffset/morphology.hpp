#pragma once

#include "surfoffset/pipeline.hpp"

namespace surfoffset {

// Closed region of the parameter domain bounded by simple, pairwise
// disjoint loops; membership follows the even-odd rule. Regions spanning a
// periodic seam are not supported.
struct Region {
  std::vector<SourceCurve> loops;

  static Region from_json_text(const std::string& text, const Surface& surface);
  static Region load(const std::string& path, const Surface& surface);
  std::string to_json_text() const;
  void validate(const Surface& surface) const;
};

bool classify_inside(const Region& region, const ParamPoint& p,
                     const Surface& surface);

struct MorphOptions {
  int segments = 1024;
  int grid_nu = 0, grid_nv = 0;
  double cutoff = 0.0;
  int threads = 0;
};

// Full distance-d level set of the region boundary, keeping the components
// outside (dilate) or inside (erode) the region.
Region dilate(const Region& region, double d, const Surface& surface,
              const MorphOptions& options = {});
Region erode(const Region& region, double d, const Surface& surface,
             const MorphOptions& options = {});

Region opening(const Region& region, double d, const Surface& surface,
               const MorphOptions& options = {});
Region closing(const Region& region, double d, const Surface& surface,
               const MorphOptions& options = {});

// Induced-metric area of the region sampled on an n x n parameter grid.
double region_area(const Region& region, const Surface& surface,
                   int samples_per_axis = 256);

}  // namespace surfoffset
