// Copyright 2026 The chainattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chainattack/eval.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "chainattack/error.h"

namespace chainattack {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFlowEps = 1e-15;

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << v;
  return out.str();
}

}  // namespace

TransportPlan SolveTransport(const std::vector<double>& source,
                             const std::vector<double>& target,
                             const std::vector<std::vector<double>>& cost) {
  const size_t n = source.size();
  const size_t m = target.size();
  if (n == 0 || m == 0 || cost.size() != n) {
    throw Error(ErrorCode::kPrecondition, "transport needs nonempty, matching inputs");
  }
  double supply = 0.0;
  double demand = 0.0;
  for (double w : source) supply += w;
  for (double w : target) demand += w;
  if (std::abs(supply - demand) > 1e-9) {
    throw Error(ErrorCode::kPrecondition, "transport marginals must have equal mass");
  }

  // Nodes: 0 = s, 1..n sources, n+1..n+m targets, n+m+1 = t.
  const size_t v = n + m + 2;
  const size_t s = 0;
  const size_t t = v - 1;
  std::vector<std::vector<double>> cap(v, std::vector<double>(v, 0.0));
  std::vector<std::vector<double>> cst(v, std::vector<double>(v, 0.0));
  for (size_t i = 0; i < n; ++i) {
    if (cost[i].size() != m) throw Error(ErrorCode::kPrecondition, "cost matrix is ragged");
    cap[s][1 + i] = source[i];
    for (size_t j = 0; j < m; ++j) {
      if (cost[i][j] < 0.0) throw Error(ErrorCode::kPrecondition, "negative ground cost");
      cap[1 + i][1 + n + j] = kInf;
      cst[1 + i][1 + n + j] = cost[i][j];
      cst[1 + n + j][1 + i] = -cost[i][j];
    }
  }
  for (size_t j = 0; j < m; ++j) cap[1 + n + j][t] = target[j];

  std::vector<double> potential(v, 0.0);
  double remaining = supply;
  while (remaining > kFlowEps) {
    std::vector<double> dist(v, kInf);
    std::vector<size_t> prev(v, v);
    std::vector<bool> done(v, false);
    dist[s] = 0.0;
    for (size_t iter = 0; iter < v; ++iter) {
      size_t u = v;
      for (size_t k = 0; k < v; ++k) {
        if (!done[k] && dist[k] < kInf && (u == v || dist[k] < dist[u])) u = k;
      }
      if (u == v) break;
      done[u] = true;
      for (size_t w = 0; w < v; ++w) {
        if (cap[u][w] <= kFlowEps || done[w]) continue;
        const double reduced = std::max(0.0, cst[u][w] + potential[u] - potential[w]);
        if (dist[u] + reduced < dist[w]) {
          dist[w] = dist[u] + reduced;
          prev[w] = u;
        }
      }
    }
    if (dist[t] == kInf) break;
    for (size_t k = 0; k < v; ++k) {
      if (dist[k] < kInf) potential[k] += dist[k];
    }
    double push = remaining;
    for (size_t w = t; w != s; w = prev[w]) push = std::min(push, cap[prev[w]][w]);
    for (size_t w = t; w != s; w = prev[w]) {
      const size_t u = prev[w];
      if (cap[u][w] != kInf) cap[u][w] -= push;
      if (cap[w][u] != kInf) cap[w][u] += push;
    }
    remaining -= push;
  }

  TransportPlan plan;
  plan.flow.assign(n, std::vector<double>(m, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      // Flow on an uncapacitated arc lives in its reverse residual.
      const double f = cap[1 + n + j][1 + i];
      plan.flow[i][j] = f;
      plan.cost += f * cost[i][j];
    }
  }
  return plan;
}

double EuclideanDistance(const std::vector<double>& u, const std::vector<double>& v) {
  double sum = 0.0;
  for (size_t k = 0; k < u.size(); ++k) {
    const double d = u[k] - v[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Nbow MakeNbow(const std::vector<std::string>& tokens, const Embeddings& embeddings) {
  std::map<std::string, size_t> counts;
  Nbow bow;
  for (const auto& t : tokens) {
    if (embeddings.LookupWithBackoff(t)) {
      ++counts[t];
    } else {
      ++bow.dropped;
    }
  }
  size_t total = 0;
  for (const auto& [t, c] : counts) total += c;
  for (const auto& [t, c] : counts) {
    bow.tokens.push_back(t);
    bow.weights.push_back(static_cast<double>(c) / static_cast<double>(total));
    bow.vectors.push_back(*embeddings.LookupWithBackoff(t));
  }
  return bow;
}

WmdResult Wmd(const std::vector<std::string>& a, const std::vector<std::string>& b,
              const Embeddings& embeddings) {
  Nbow x = MakeNbow(a, embeddings);
  Nbow y = MakeNbow(b, embeddings);
  WmdResult result;
  result.dropped_a = x.dropped;
  result.dropped_b = y.dropped;
  if (x.tokens.empty() || y.tokens.empty()) {
    throw Error(ErrorCode::kUndefinedDistance, "a side has no token with an embedding");
  }
  // Solving in a canonical orientation makes the result exactly symmetric.
  if (std::tie(y.tokens, y.weights) < std::tie(x.tokens, x.weights)) std::swap(x, y);
  if (x.tokens == y.tokens && x.weights == y.weights) return result;
  std::vector<std::vector<double>> cost(x.tokens.size(),
                                        std::vector<double>(y.tokens.size()));
  for (size_t i = 0; i < x.tokens.size(); ++i) {
    for (size_t j = 0; j < y.tokens.size(); ++j) {
      cost[i][j] = EuclideanDistance(x.vectors[i], y.vectors[j]);
    }
  }
  result.distance = SolveTransport(x.weights, y.weights, cost).cost;
  return result;
}

WmdResult Wmd(const std::vector<Token>& a, const std::vector<Token>& b,
              const Embeddings& embeddings) {
  std::vector<std::string> sa;
  std::vector<std::string> sb;
  for (const auto& t : a) sa.push_back(t.surface);
  for (const auto& t : b) sb.push_back(t.surface);
  return Wmd(sa, sb, embeddings);
}

double Accuracy(const VictimOracle& oracle, const std::vector<LabeledExample>& examples) {
  if (examples.empty()) throw Error(ErrorCode::kInvalidEvaluation, "no examples to score");
  size_t correct = 0;
  for (const auto& ex : examples) {
    if (oracle.Predict(ex.text).label == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

double Accuracy(const VictimOracle& oracle, const LabeledDataset& dataset) {
  return Accuracy(oracle, dataset.examples);
}

AttackEvalOutput AttackEval(const std::string& model, const VictimOracle& oracle,
                            const LabeledDataset& dataset, int attacked_label,
                            const ExampleAttacker& attacker, const Embeddings& embeddings,
                            int jobs) {
  AttackEvalOutput out;
  std::vector<LabeledExample> subset;
  for (size_t i = 0; i < dataset.examples.size(); ++i) {
    if (attacked_label < 0 || dataset.examples[i].label == attacked_label) {
      out.indices.push_back(i);
      subset.push_back(dataset.examples[i]);
    }
  }
  out.row.model = model;
  out.row.examples = subset.size();
  out.row.clean_acc = Accuracy(oracle, subset);

  out.results.resize(subset.size());
  ParallelFor(subset.size(), jobs, [&](size_t k) {
    out.results[k] = attacker(subset[k], out.indices[k]);
  });

  size_t correct = 0;
  double wmd_sum = 0.0;
  size_t wmd_count = 0;
  double queries = 0.0;
  for (size_t k = 0; k < subset.size(); ++k) {
    const AttackResult& r = out.results[k];
    queries += static_cast<double>(r.queries);
    const int label = oracle.Predict(RenderTokens(r.adversarial)).label;
    if (label == subset[k].label) {
      ++correct;
      continue;
    }
    if (r.adversarial == r.original) continue;
    ++out.row.successes;
    try {
      wmd_sum += Wmd(r.original, r.adversarial, embeddings).distance;
      ++wmd_count;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefinedDistance) throw;
      ++out.row.wmd_undefined;
    }
  }
  out.row.attacked_acc = static_cast<double>(correct) / static_cast<double>(subset.size());
  out.row.mean_queries = queries / static_cast<double>(subset.size());
  if (wmd_count > 0) out.row.mean_wmd = wmd_sum / static_cast<double>(wmd_count);
  return out;
}

EvalRow SummarizeAttacks(const std::string& model, const std::vector<AttackResult>& results,
                         const Embeddings& embeddings) {
  if (results.empty()) throw Error(ErrorCode::kInvalidEvaluation, "no attack results");
  EvalRow row;
  row.model = model;
  row.examples = results.size();
  size_t clean = 0;
  size_t attacked = 0;
  double queries = 0.0;
  double wmd_sum = 0.0;
  size_t wmd_count = 0;
  for (const AttackResult& r : results) {
    queries += static_cast<double>(r.queries);
    if (r.original_label == r.true_label) ++clean;
    if (r.label == r.true_label) {
      ++attacked;
      continue;
    }
    if (r.adversarial == r.original) continue;
    ++row.successes;
    try {
      wmd_sum += Wmd(r.original, r.adversarial, embeddings).distance;
      ++wmd_count;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefinedDistance) throw;
      ++row.wmd_undefined;
    }
  }
  const auto n = static_cast<double>(results.size());
  row.clean_acc = static_cast<double>(clean) / n;
  row.attacked_acc = static_cast<double>(attacked) / n;
  row.mean_queries = queries / n;
  if (wmd_count > 0) row.mean_wmd = wmd_sum / static_cast<double>(wmd_count);
  return row;
}

std::string EvalRowTsvHeader() {
  return "model\texamples\tclean_acc\tattacked_acc\tsuccesses\tmean_wmd\tmean_queries";
}

std::string EvalRowTsv(const EvalRow& row) {
  std::ostringstream out;
  out << row.model << '\t' << row.examples << '\t' << FormatDouble(row.clean_acc) << '\t'
      << FormatDouble(row.attacked_acc) << '\t' << row.successes << '\t'
      << (row.mean_wmd ? FormatDouble(*row.mean_wmd) : "N/A") << '\t'
      << FormatDouble(row.mean_queries);
  return out.str();
}

TransferTable TransferMatrix(const std::vector<AdversarialSet>& sets,
                             const std::vector<NamedOracle>& targets) {
  TransferTable table;
  for (const auto& t : targets) table.targets.push_back(t.name);
  for (const auto& set : sets) {
    table.sources.push_back(set.source);
    std::vector<std::optional<double>> row;
    for (const auto& t : targets) {
      if (t.name == set.source) {
        row.push_back(std::nullopt);
      } else {
        row.push_back(Accuracy(*t.oracle, set.examples));
      }
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

std::string TransferTsv(const TransferTable& table) {
  std::ostringstream out;
  out << "source";
  for (const auto& t : table.targets) out << '\t' << t;
  out << '\n';
  for (size_t s = 0; s < table.sources.size(); ++s) {
    out << table.sources[s];
    for (const auto& cell : table.cells[s]) {
      out << '\t' << (cell ? FormatDouble(*cell) : "N/A");
    }
    out << '\n';
  }
  return out.str();
}

void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min(n, static_cast<size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::mutex mu;
  size_t failed_at = n;
  std::exception_ptr failure;
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < failed_at) {
            failed_at = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace chainattack
