#include "core/assignment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace segcx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> transpose(std::span<const double> m, std::size_t rows, std::size_t cols) {
  std::vector<double> t(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = m[r * cols + c];
  }
  return t;
}

// Shortest augmenting path with dual potentials; rows <= cols.
// Columns are scanned through a compacted list of those not yet labeled in the
// current phase; minv carries a lazy offset instead of a full decrement.
std::vector<int> hungarian_wide(std::span<const double> cost, std::size_t rows, std::size_t cols) {
  const std::size_t n = rows, m = cols;
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  std::vector<std::size_t> unused, labeled;
  unused.reserve(m);
  labeled.reserve(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    unused.clear();
    labeled.clear();
    for (std::size_t j = 1; j <= m; ++j) {
      unused.push_back(j);
      minv[j] = kInf;
    }
    labeled.push_back(0);
    double offset = 0.0;
    do {
      const std::size_t i0 = match[j0];
      const double* row = cost.data() + (i0 - 1) * m;
      const double ui = u[i0];
      double delta = kInf;
      std::size_t pos = 0;
      for (std::size_t k = 0; k < unused.size(); ++k) {
        const std::size_t j = unused[k];
        const double cur = row[j - 1] - ui - v[j] + offset;
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          pos = k;
        }
      }
      delta -= offset;
      const std::size_t j1 = unused[pos];
      unused[pos] = unused.back();
      unused.pop_back();
      for (std::size_t j : labeled) {
        u[match[j]] += delta;
        v[j] -= delta;
      }
      offset += delta;
      labeled.push_back(j1);
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

// Forward auction on the square problem obtained by adding (cols - rows)
// dummy persons of zero benefit. Prices only rise, so each person caches its
// top candidates together with the value bound of everything outside the
// cache; a bid rescans the full row only once the cache can no longer prove
// its best and second-best objects.
class Auction {
 public:
  Auction(std::span<const double> benefit, std::size_t rows, std::size_t cols)
      : benefit_(benefit),
        real_(rows),
        n_(cols),
        price_(cols, 0.0),
        person_to_object_(cols, -1),
        object_to_person_(cols, -1),
        cache_(cols * kCache),
        bound_(cols, kInf),
        cache_valid_(cols, 0) {}

  std::vector<int> run(double tolerance) {
    double span = 0.0;
    for (double b : benefit_) span = std::max(span, std::abs(b));
    const double eps_final = std::max(tolerance / static_cast<double>(n_), 1e-300);
    double eps = std::max(span / kScaling, eps_final);
    std::vector<std::size_t> pending;
    while (true) {
      std::fill(person_to_object_.begin(), person_to_object_.end(), -1);
      std::fill(object_to_person_.begin(), object_to_person_.end(), -1);
      pending.clear();
      for (std::size_t i = n_; i-- > 0;) pending.push_back(i);
      while (!pending.empty()) {
        const std::size_t person = pending.back();
        pending.pop_back();
        const int displaced = bid(person, eps);
        if (displaced >= 0) pending.push_back(static_cast<std::size_t>(displaced));
      }
      if (eps <= eps_final) break;
      eps = std::max(eps / kScaling, eps_final);
    }
    return {person_to_object_.begin(), person_to_object_.begin() + static_cast<std::ptrdiff_t>(real_)};
  }

 private:
  static constexpr std::size_t kCache = 8;
  static constexpr double kScaling = 7.0;

  double value(std::size_t person, std::size_t object) const {
    const double b = person < real_ ? benefit_[person * n_ + object] : 0.0;
    return b - price_[object];
  }

  void rescan(std::size_t person) {
    std::array<double, kCache + 1> top_value;
    std::array<std::size_t, kCache + 1> top_index;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = value(person, j);
      if (count == kCache + 1 && v <= top_value[kCache]) continue;
      std::size_t p = count < kCache + 1 ? count++ : kCache;
      while (p > 0 && top_value[p - 1] < v) {
        top_value[p] = top_value[p - 1];
        top_index[p] = top_index[p - 1];
        --p;
      }
      top_value[p] = v;
      top_index[p] = j;
    }
    const std::size_t kept = std::min(count, kCache);
    for (std::size_t k = 0; k < kCache; ++k) {
      cache_[person * kCache + k] = top_index[std::min(k, kept - 1)];
    }
    bound_[person] = count > kCache ? top_value[kCache] : -kInf;
    cache_valid_[person] = 1;
  }

  int bid(std::size_t person, double eps) {
    double best = -kInf, second = -kInf;
    std::size_t target = 0;
    while (true) {
      if (!cache_valid_[person]) rescan(person);
      best = -kInf;
      second = -kInf;
      const std::size_t* c = &cache_[person * kCache];
      std::size_t last = n_;
      for (std::size_t k = 0; k < kCache; ++k) {
        if (c[k] == last) continue;  // padded duplicate of a short cache
        last = c[k];
        const double v = value(person, c[k]);
        if (v > best) {
          second = best;
          best = v;
          target = c[k];
        } else if (v > second) {
          second = v;
        }
      }
      if (second >= bound_[person] || n_ == 1) break;
      cache_valid_[person] = 0;
    }
    const double increment = (n_ > 1 && std::isfinite(second) ? best - second : 0.0) + eps;
    price_[target] += increment;
    const int previous = object_to_person_[target];
    object_to_person_[target] = static_cast<int>(person);
    person_to_object_[person] = static_cast<int>(target);
    if (previous >= 0) person_to_object_[previous] = -1;
    return previous;
  }

  std::span<const double> benefit_;
  std::size_t real_;
  std::size_t n_;
  std::vector<double> price_;
  std::vector<int> person_to_object_;
  std::vector<int> object_to_person_;
  std::vector<std::size_t> cache_;
  std::vector<double> bound_;
  std::vector<char> cache_valid_;
};

void check_shape(std::span<const double> m, std::size_t rows, std::size_t cols) {
  if (m.size() != rows * cols) {
    fail(ErrorCode::kDimensionMismatch, "assignment: matrix size does not match rows*cols");
  }
}

void accumulate_total(Assignment& out, std::span<const double> m, std::size_t cols) {
  out.total = 0.0;
  for (std::size_t r = 0; r < out.row_to_col.size(); ++r) {
    if (out.row_to_col[r] >= 0) out.total += m[r * cols + out.row_to_col[r]];
  }
}

}  // namespace

Assignment solve_assignment(std::span<const double> cost, std::size_t rows, std::size_t cols) {
  check_shape(cost, rows, cols);
  Assignment out;
  out.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) return out;

  if (rows <= cols) {
    out.row_to_col = hungarian_wide(cost, rows, cols);
  } else {
    const std::vector<double> t = transpose(cost, rows, cols);
    const std::vector<int> col_to_row = hungarian_wide(t, cols, rows);
    for (std::size_t c = 0; c < cols; ++c) out.row_to_col[col_to_row[c]] = static_cast<int>(c);
  }
  accumulate_total(out, cost, cols);
  return out;
}

Assignment solve_assignment_auction(std::span<const double> benefit, std::size_t rows, std::size_t cols,
                                    double tolerance) {
  check_shape(benefit, rows, cols);
  if (!(tolerance > 0.0)) fail(ErrorCode::kInvalidArgument, "auction tolerance must be positive");
  Assignment out;
  out.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) return out;

  if (rows <= cols) {
    out.row_to_col = Auction(benefit, rows, cols).run(tolerance);
  } else {
    const std::vector<double> t = transpose(benefit, rows, cols);
    const std::vector<int> col_to_row = Auction(t, cols, rows).run(tolerance);
    for (std::size_t c = 0; c < cols; ++c) out.row_to_col[col_to_row[c]] = static_cast<int>(c);
  }
  accumulate_total(out, benefit, cols);
  return out;
}

Transportation solve_transportation(std::span<const double> cost, std::span<const long long> row_mass,
                                    std::span<const long long> col_mass) {
  const std::size_t rows = row_mass.size(), cols = col_mass.size();
  check_shape(cost, rows, cols);
  long long supply = 0, capacity = 0;
  for (long long m : row_mass) {
    if (m < 0) fail(ErrorCode::kInvalidArgument, "transportation: negative mass");
    supply += m;
  }
  for (long long m : col_mass) {
    if (m < 0) fail(ErrorCode::kInvalidArgument, "transportation: negative mass");
    capacity += m;
  }
  Transportation out;
  out.flow.assign(rows * cols, 0);
  const long long target = std::min(supply, capacity);
  if (target == 0) return out;

  // Shifting every cost by the minimum keeps reduced costs non-negative from
  // the start and changes the objective by a constant.
  const double shift = *std::min_element(cost.begin(), cost.end());

  // Nodes: rows [0, rows), columns [rows, rows + cols), then sink and source.
  const std::size_t sink = rows + cols, source = rows + cols + 1, n = rows + cols + 2;
  std::vector<long long> row_left(row_mass.begin(), row_mass.end());
  std::vector<long long> col_left(col_mass.begin(), col_mass.end());
  std::vector<double> potential(n, 0.0), dist(n);
  std::vector<std::size_t> parent(n);
  std::vector<char> done(n);

  long long shipped = 0;
  while (shipped < target) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    dist[source] = 0.0;
    while (true) {
      std::size_t u = n;
      double best = kInf;
      for (std::size_t v = 0; v < n; ++v) {
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      }
      if (u == n) break;
      done[u] = 1;
      // Edges back into the source or out of the sink never lie on a
      // shortest source-sink path and are skipped.
      if (u == sink) continue;
      const auto relax = [&](std::size_t v, double reduced) {
        const double d = dist[u] + std::max(reduced, 0.0);
        if (!done[v] && d < dist[v]) {
          dist[v] = d;
          parent[v] = u;
        }
      };
      if (u == source) {
        for (std::size_t r = 0; r < rows; ++r) {
          if (row_left[r] > 0) relax(r, potential[source] - potential[r]);
        }
      } else if (u < rows) {
        const double* row = cost.data() + u * cols;
        for (std::size_t c = 0; c < cols; ++c) {
          relax(rows + c, (row[c] - shift) + potential[u] - potential[rows + c]);
        }
      } else {
        const std::size_t c = u - rows;
        for (std::size_t r = 0; r < rows; ++r) {
          if (out.flow[r * cols + c] > 0) relax(r, -(cost[r * cols + c] - shift) + potential[u] - potential[r]);
        }
        if (col_left[c] > 0) relax(sink, potential[u] - potential[sink]);
      }
    }
    if (!std::isfinite(dist[sink])) break;
    for (std::size_t v = 0; v < n; ++v) potential[v] += std::min(dist[v], dist[sink]);

    // Bottleneck along the path, then push.
    long long push = target - shipped;
    std::size_t v = sink;
    while (parent[v] != source) {
      const std::size_t u = parent[v];
      if (v == sink) {
        push = std::min(push, col_left[u - rows]);
      } else if (u >= rows) {  // reverse edge column -> row
        push = std::min(push, out.flow[v * cols + (u - rows)]);
      }
      v = u;
    }
    push = std::min(push, row_left[v]);
    v = sink;
    while (parent[v] != source) {
      const std::size_t u = parent[v];
      if (v == sink) {
        col_left[u - rows] -= push;
      } else if (u >= rows) {
        out.flow[v * cols + (u - rows)] -= push;
      } else {
        out.flow[u * cols + (v - rows)] += push;
      }
      v = u;
    }
    row_left[v] -= push;
    shipped += push;
  }

  for (std::size_t i = 0; i < out.flow.size(); ++i) {
    if (out.flow[i] != 0) out.total += cost[i] * static_cast<double>(out.flow[i]);
  }
  return out;
}

}  // namespace segcx
