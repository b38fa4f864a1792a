#include "nematic/grid.hpp"

#include <cmath>
#include <string>

#include "nematic/errors.hpp"

namespace nematic {

std::string_view to_string(Dealias mode) {
  switch (mode) {
    case Dealias::none: return "none";
    case Dealias::two_thirds: return "two_thirds";
    case Dealias::exact: return "exact";
  }
  return "?";
}

Dealias parse_dealias(std::string_view text) {
  if (text == "none") return Dealias::none;
  if (text == "two_thirds") return Dealias::two_thirds;
  if (text == "exact") return Dealias::exact;
  throw ConfigError("dealias must be one of none, two_thirds, exact (got '" + std::string(text) + "')");
}

Padding default_padding(Dealias mode) {
  switch (mode) {
    case Dealias::none: return {1, 1};
    case Dealias::two_thirds: return {3, 2};
    case Dealias::exact: return {3, 1};
  }
  return {1, 1};
}

Padding parse_padding(std::string_view text) {
  if (text == "1") return {1, 1};
  if (text == "3/2" || text == "1.5") return {3, 2};
  if (text == "3") return {3, 1};
  throw ConfigError("padding_factor must be one of 1, 3/2, 3 (got '" + std::string(text) + "')");
}

std::string to_string(Padding p) {
  return p.den == 1 ? std::to_string(p.num) : std::to_string(p.num) + "/" + std::to_string(p.den);
}

GridSpec::GridSpec(int dim, int n, Dealias dealias, std::optional<Padding> padding)
    : dim_(dim), n_(n), dealias_(dealias), padding_(padding.value_or(default_padding(dealias))) {
  if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  if (n < 4 || n % 2 != 0) throw ConfigError("n must be even and >= 4");
  const Padding allowed[] = {{1, 1}, {3, 2}, {3, 1}};
  bool known = false;
  for (const auto& a : allowed) known = known || a == padding_;
  if (!known) throw ConfigError("padding_factor must be one of 1, 3/2, 3");
  switch (dealias) {
    case Dealias::none:
      if (padding_.value() != 1.0) throw ConfigError("dealias = none requires padding_factor = 1");
      break;
    case Dealias::two_thirds:
      if (padding_.value() < 1.5) throw ConfigError("dealias = two_thirds requires padding_factor >= 3/2");
      break;
    case Dealias::exact:
      if (padding_.value() < 3.0)
        throw ConfigError("padding insufficient for exact dealiasing of quintic products (needs padding_factor = 3)");
      break;
  }
}

bool GridSpec::exact_for_degree(int degree) const {
  return fine_n() > (degree + 1) * bandwidth();
}

std::size_t GridSpec::ipow(int base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

VectorField::VectorField(const GridSpec& grid, int components, Level level)
    : grid_(grid), level_(level), components_(components) {
  if (components < 1) throw ConfigError("field needs at least one component");
  data_.assign(static_cast<std::size_t>(components) * points(), 0.0);
}

double VectorField::coordinate(std::size_t p, int axis) const {
  const auto s = static_cast<std::size_t>(size());
  for (int a = grid_.dim() - 1; a > axis; --a) p /= s;
  return static_cast<double>(p % s) / static_cast<double>(s);
}

bool VectorField::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

SpectralField::SpectralField(const GridSpec& grid, int components, Level level)
    : grid_(grid), level_(level), components_(components) {
  if (components < 1) throw ConfigError("field needs at least one component");
  const auto s = static_cast<std::size_t>(size());
  modes_ = s / 2 + 1;
  for (int a = 0; a < grid.dim() - 1; ++a) modes_ *= s;
  data_.assign(static_cast<std::size_t>(components) * modes_, Complex{});
}

}  // namespace nematic
