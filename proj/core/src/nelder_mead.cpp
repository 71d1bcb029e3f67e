#include "mlpoisson/fitting/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlpoisson/errors.hpp"

namespace mlpoisson {

namespace {

using Point = std::vector<double>;

// base + scale * (toward - base)
Point blend(const Point& base, const Point& toward, double scale) {
  Point out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    out[i] = base[i] + scale * (toward[i] - base[i]);
  }
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> start,
                             std::span<const double> steps, const NelderMeadOptions& opts) {
  const std::size_t dim = start.size();
  if (dim == 0 || steps.size() != dim) {
    throw InvalidParams("Nelder-Mead needs one step per coordinate");
  }
  auto eval = [&](const Point& x) { return f(std::span<const double>(x)); };

  std::vector<Point> vertices(dim + 1, Point(start.begin(), start.end()));
  for (std::size_t i = 0; i < dim; ++i) {
    vertices[i + 1][i] += steps[i];
  }
  std::vector<double> values(dim + 1);
  std::transform(vertices.begin(), vertices.end(), values.begin(), eval);

  std::vector<std::size_t> order(dim + 1);
  NelderMeadResult result;
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];
    result.trace.push_back(values[best]);

    double diameter = 0.0;
    for (const Point& v : vertices) {
      for (std::size_t i = 0; i < dim; ++i) {
        diameter = std::max(diameter, std::abs(v[i] - vertices[best][i]));
      }
    }
    if (diameter <= opts.tol) {
      result.converged = true;
      break;
    }
    if (result.iterations >= opts.max_iter) {
      break;
    }
    ++result.iterations;

    Point centroid(dim, 0.0);
    for (std::size_t j = 0; j <= dim; ++j) {
      if (j == worst) {
        continue;
      }
      for (std::size_t i = 0; i < dim; ++i) {
        centroid[i] += vertices[j][i] / static_cast<double>(dim);
      }
    }

    const Point reflected = blend(centroid, vertices[worst], -opts.reflection);
    const double f_reflected = eval(reflected);

    if (f_reflected < values[best]) {
      const Point expanded = blend(centroid, reflected, opts.expansion);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertices[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        vertices[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      vertices[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }

    bool accepted = false;
    if (f_reflected < values[worst]) {
      const Point outside = blend(centroid, reflected, opts.contraction);
      const double f_outside = eval(outside);
      if (f_outside <= f_reflected) {
        vertices[worst] = outside;
        values[worst] = f_outside;
        accepted = true;
      }
    } else {
      const Point inside = blend(centroid, vertices[worst], opts.contraction);
      const double f_inside = eval(inside);
      if (f_inside < values[worst]) {
        vertices[worst] = inside;
        values[worst] = f_inside;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t j = 0; j <= dim; ++j) {
        if (j == best) {
          continue;
        }
        vertices[j] = blend(vertices[best], vertices[j], opts.shrink);
        values[j] = eval(vertices[j]);
      }
    }
  }

  const std::size_t best = order.front();
  result.best = vertices[best];
  result.value = values[best];
  return result;
}

}  // namespace mlpoisson
