#include "slotkit/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace slotkit {

Material Material::named(const std::string& name) {
  if (name == "air") return air();
  if (name == "diamond") return diamond();
  if (name == "GaP" || name == "gallium_phosphide") return gallium_phosphide();
  throw ConfigError("unknown material name '" + name + "' (known: air, diamond, GaP)");
}

const char* to_string(Arrangement a) {
  switch (a) {
    case Arrangement::single: return "single";
    case Arrangement::cladding_separated: return "cladding_separated";
    case Arrangement::shared_rod: return "shared_rod";
    case Arrangement::solid_rod: return "solid_rod";
  }
  return "?";
}

Arrangement arrangement_from_string(const std::string& s) {
  if (s == "single") return Arrangement::single;
  if (s == "cladding_separated") return Arrangement::cladding_separated;
  if (s == "shared_rod") return Arrangement::shared_rod;
  if (s == "solid_rod") return Arrangement::solid_rod;
  throw ConfigError("unknown arrangement '" + s +
                    "' (single, cladding_separated, shared_rod, solid_rod)");
}

double SlotArraySpec::pitch() const {
  switch (arrangement) {
    case Arrangement::cladding_separated: return w_G + 2.0 * w_R + w_s;
    case Arrangement::shared_rod: return w_R + w_s;
    default: return 0.0;
  }
}

double SlotArraySpec::structure_width() const {
  const int n = n_guides;
  switch (arrangement) {
    case Arrangement::single: return 2.0 * w_R + w_s;
    case Arrangement::cladding_separated:
      return n * (2.0 * w_R + w_s) + (n - 1) * w_G;
    case Arrangement::shared_rod: return (n + 1) * w_R + n * w_s;
    case Arrangement::solid_rod: return solid_width;
  }
  return 0.0;
}

std::vector<double> SlotArraySpec::slot_centers() const {
  if (arrangement == Arrangement::solid_rod) return {};
  const int n = (arrangement == Arrangement::single) ? 1 : n_guides;
  const double d = (n > 1) ? pitch() : 0.0;
  std::vector<double> centers(n);
  for (int i = 0; i < n; ++i) centers[i] = (i - 0.5 * (n - 1)) * d;
  return centers;
}

std::vector<SlotArraySpec::Rect> SlotArraySpec::rods() const {
  const double y0 = -0.5 * h, y1 = 0.5 * h;
  std::vector<Rect> out;
  if (arrangement == Arrangement::solid_rod) {
    out.push_back({-0.5 * solid_width, 0.5 * solid_width, y0, y1});
    return out;
  }
  const auto centers = slot_centers();
  if (arrangement == Arrangement::shared_rod) {
    // n_guides slots share n_guides+1 rods.
    for (std::size_t j = 0; j <= centers.size(); ++j) {
      const double left = (j == 0) ? centers.front() - 0.5 * w_s - w_R
                                   : centers[j - 1] + 0.5 * w_s;
      out.push_back({left, left + w_R, y0, y1});
    }
    return out;
  }
  for (double c : centers) {
    out.push_back({c - 0.5 * w_s - w_R, c - 0.5 * w_s, y0, y1});
    out.push_back({c + 0.5 * w_s, c + 0.5 * w_s + w_R, y0, y1});
  }
  return out;
}

void SlotArraySpec::validate() const {
  if (h <= 0.0) throw ConfigError("height must be positive");
  if (rod.index <= 0.0 || cladding.index <= 0.0)
    throw ConfigError("material indices must be positive");
  if (rod.index <= cladding.index)
    throw ConfigError("rod index must exceed the cladding index");
  if (arrangement == Arrangement::solid_rod) {
    if (solid_width <= 0.0) throw ConfigError("solid width must be positive");
    return;
  }
  if (w_s <= 0.0 || w_R <= 0.0) throw ConfigError("slot and rod widths must be positive");
  if (n_guides < 1) throw ConfigError("need at least one guide");
  if (arrangement == Arrangement::cladding_separated && n_guides > 1 && w_G < 0.0)
    throw ConfigError("cladding gap must be non-negative");
}

namespace {

struct Strip {
  double weight;
  double eps;
};

// Canonically ordered accumulation so mirror-image cells sum in the same
// order and come out bit-identical.
void sort_strips(std::vector<Strip>& s) {
  std::sort(s.begin(), s.end(), [](const Strip& a, const Strip& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.eps > b.eps;
  });
}

// Permittivity of one cell: exact sub-cell partition along the rectangle
// edges, harmonic mean across x within each y-strip (eps E_x continuous
// across x-normal walls), then arithmetic mean across y.
double cell_eps(double x0, double x1, double y0, double y1,
                const std::vector<SlotArraySpec::Rect>& rods, double eps_rod,
                double eps_cl) {
  auto inside = [&](double x, double y) {
    for (const auto& r : rods)
      if (x > r.x0 && x < r.x1 && y > r.y0 && y < r.y1) return true;
    return false;
  };

  std::vector<double> xs{x0, x1}, ys{y0, y1};
  for (const auto& r : rods) {
    if (r.x0 > x0 && r.x0 < x1) xs.push_back(r.x0);
    if (r.x1 > x0 && r.x1 < x1) xs.push_back(r.x1);
    if (r.y0 > y0 && r.y0 < y1) ys.push_back(r.y0);
    if (r.y1 > y0 && r.y1 < y1) ys.push_back(r.y1);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  bool any_rod = false, any_clad = false;
  std::vector<Strip> rows;
  for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
    const double hy = ys[j + 1] - ys[j];
    if (hy <= 0.0) continue;
    const double yc = 0.5 * (ys[j] + ys[j + 1]);
    std::vector<Strip> cols;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double wx = xs[i + 1] - xs[i];
      if (wx <= 0.0) continue;
      const double xc = 0.5 * (xs[i] + xs[i + 1]);
      const bool in = inside(xc, yc);
      (in ? any_rod : any_clad) = true;
      cols.push_back({wx / (x1 - x0), in ? eps_rod : eps_cl});
    }
    sort_strips(cols);
    double inv = 0.0;
    for (const auto& c : cols) inv += c.weight / c.eps;
    rows.push_back({hy / (y1 - y0), 1.0 / inv});
  }
  if (!any_rod) return eps_cl;
  if (!any_clad) return eps_rod;
  sort_strips(rows);
  double eps = 0.0;
  for (const auto& r : rows) eps += r.weight * r.eps;
  return eps;
}

IndexMap rasterize(const SlotArraySpec& spec, const GridSpec& grid,
                   const std::vector<SlotArraySpec::Rect>& rods) {
  spec.validate();
  if (grid.dx <= 0.0 || grid.dy <= 0.0) throw ConfigError("grid steps must be positive");
  if (spec.arrangement != Arrangement::solid_rod) {
    if (grid.dx > 0.25 * spec.w_s)
      throw ConfigError("dx leaves the slot under-resolved (need dx <= w_s/4)");
    if (grid.dy > 0.25 * spec.w_s)
      throw ConfigError("dy leaves the slot under-resolved (need dy <= w_s/4)");
  } else if (grid.dx > 0.25 * spec.solid_width) {
    throw ConfigError("dx leaves the rod under-resolved");
  }
  if (grid.pad_x < 400.0 || grid.pad_y < 400.0)
    throw ConfigError("padding must be at least 400 nm per side");

  IndexMap map;
  map.dx = grid.dx;
  map.dy = grid.dy;
  map.nx = static_cast<int>(std::ceil((spec.structure_width() + 2.0 * grid.pad_x) / grid.dx - 1e-9));
  map.ny = static_cast<int>(std::ceil((spec.h + 2.0 * grid.pad_y) / grid.dy - 1e-9));
  map.origin_x = -0.5 * map.nx * map.dx;  // domain centred on the array
  map.origin_y = -0.5 * map.ny * map.dy;
  map.n_cl = spec.cladding.index;
  map.n_max = std::max(spec.rod.index, spec.cladding.index);
  map.slot_centers = spec.slot_centers();

  const double eps_rod = spec.rod.index * spec.rod.index;
  const double eps_cl = spec.cladding.index * spec.cladding.index;

  map.eps.resize(map.nx, map.ny);
  for (int i = 0; i < map.nx; ++i) {
    const double x0 = map.origin_x + i * map.dx;
    const double x1 = map.origin_x + (i + 1) * map.dx;
    for (int j = 0; j < map.ny; ++j) {
      const double y0 = map.origin_y + j * map.dy;
      const double y1 = map.origin_y + (j + 1) * map.dy;
      map.eps(i, j) = cell_eps(x0, x1, y0, y1, rods, eps_rod, eps_cl);
    }
  }
  return map;
}

}  // namespace

IndexMap build_cross_section(const SlotArraySpec& spec, const GridSpec& grid) {
  return rasterize(spec, grid, spec.rods());
}

IndexMap build_single_guide(const SlotArraySpec& spec, const GridSpec& grid, int which) {
  const int n = (spec.arrangement == Arrangement::single) ? 1 : spec.n_guides;
  if (which < 0 || which >= n) throw ConfigError("guide index out of range");
  const auto all = spec.rods();
  std::vector<SlotArraySpec::Rect> keep;
  if (spec.arrangement == Arrangement::shared_rod) {
    keep = {all[which], all[which + 1]};  // the two rods flanking slot `which`
  } else if (spec.arrangement == Arrangement::solid_rod) {
    keep = all;
  } else {
    keep = {all[2 * which], all[2 * which + 1]};
  }
  IndexMap map = rasterize(spec, grid, keep);
  if (spec.arrangement != Arrangement::solid_rod)
    map.slot_centers = {spec.slot_centers()[which]};
  return map;
}

}  // namespace slotkit
