#pragma once

#include "slotkit/types.hpp"

namespace slotkit {

struct Material {
  std::string name;
  double index = 1.0;

  static Material air() { return {"air", 1.0}; }
  static Material diamond() { return {"diamond", 2.4}; }
  static Material gallium_phosphide() { return {"GaP", 3.3}; }
  // Resolve one of the known names above (case-sensitive), throws ConfigError otherwise.
  static Material named(const std::string& name);
};

enum class Arrangement { single, cladding_separated, shared_rod, solid_rod };

const char* to_string(Arrangement a);
Arrangement arrangement_from_string(const std::string& s);

// Cross-section of an array of vertical-slot guides (or one solid rod).
// Each guide is rod | slot | rod; the slot is filled with the cladding material.
// All lengths in nm. The array is centred on x = 0, y = 0.
struct SlotArraySpec {
  Arrangement arrangement = Arrangement::single;
  int n_guides = 1;       // number of slots (1 for single; ignored for solid_rod)
  double w_s = 20.0;      // slot width
  double w_R = 140.0;     // rod width
  double h = 110.0;       // height
  double w_G = 200.0;     // cladding gap between adjacent units (cladding_separated)
  double solid_width = 300.0;  // solid_rod only
  Material rod = Material::diamond();
  Material cladding = Material::air();

  double pitch() const;                      // centre-to-centre slot distance, nm (0 if single)
  std::vector<double> slot_centers() const;  // x of each slot centre, nm
  double structure_width() const;            // total extent of rods+slots, nm

  struct Rect {
    double x0, x1, y0, y1;
  };
  std::vector<Rect> rods() const;  // axis-aligned high-index rectangles

  void validate() const;  // throws ConfigError on nonsense dimensions
};

struct GridSpec {
  double dx = 5.0;      // nm
  double dy = 5.0;      // nm
  double pad_x = 500.0; // cladding margin each side, nm
  double pad_y = 500.0;
};

// Relative permittivity rasterised on a uniform cell-centred grid.
// Cells cut by a material interface carry a sub-cell average: harmonic across x
// (the quasi-TE field component is normal to x-interfaces, so eps*E is the
// continuous quantity) and arithmetic across y (field tangential there).
struct IndexMap {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;          // nm
  double origin_x = 0.0, origin_y = 0.0;  // lower-left corner of the domain, nm
  ArrayXXd eps;                       // (nx, ny)
  double n_cl = 1.0;                  // cladding index
  double n_max = 1.0;                 // largest material index present
  std::vector<double> slot_centers;   // nm; empty for solid_rod

  double cell_x(int i) const { return origin_x + (i + 0.5) * dx; }
  double cell_y(int j) const { return origin_y + (j + 0.5) * dy; }
  double width() const { return nx * dx; }
  double height() const { return ny * dy; }
};

// Rasterise the full array. Throws ConfigError for an under-resolved slot
// (dx or dy > w_s/4), padding < 400 nm, or non-positive dimensions.
IndexMap build_cross_section(const SlotArraySpec& spec, const GridSpec& grid);

// Same domain and grid as build_cross_section but keeping only the rods of
// guide `which` (0-based, left to right). Used for perturbation overlaps.
IndexMap build_single_guide(const SlotArraySpec& spec, const GridSpec& grid, int which);

}  // namespace slotkit
