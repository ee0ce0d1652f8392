// Copyright 2026 The uspann Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uspann/dataset.h"
#include "uspann/dataset_io.h"
#include "uspann/distance.h"
#include "uspann/ensemble_index.h"
#include "uspann/error.h"
#include "uspann/flat_index.h"
#include "uspann/hierarchical_index.h"
#include "uspann/index_io.h"
#include "uspann/kmeans.h"
#include "uspann/knn.h"
#include "uspann/metrics.h"
#include "uspann/model.h"
#include "uspann/synthetic.h"
#include "uspann/trainer.h"

namespace uspann::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  // data
  std::string dataset;
  std::string format;
  std::string queries;
  double query_fraction = 0.2;
  std::uint64_t split_seed = 0;
  bool no_standardize = false;
  std::string metric = "euclidean";
  // knn
  std::size_t k_prime = 10;
  std::string knn_cache;
  // model and training
  std::string arch = "mlp";
  std::size_t m = 16;
  std::size_t hidden = 128;
  double dropout = 0.1;
  double eta = 7.0;
  std::size_t epochs = 100;
  double batch_fraction = 0.04;
  double learning_rate = 1e-3;
  std::string targets = "argmax";
  std::uint64_t seed = 0;
  std::string log;
  // index
  std::size_t ensemble = 1;
  bool union_probe = false;
  std::string fanouts;
  std::string model;
  std::string index;
  // evaluation
  std::size_t k = 10;
  std::string m_prime;
  std::string methods = "usp,kmeans";
  std::size_t kmeans_iters = 100;
  std::string out;
};

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    std::string item(text.substr(start, end - start));
    if (!item.empty()) parts.push_back(item);
    start = end + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid " + std::string(what) + ": '" +
                     std::string(text) + "'");
  }
  return value;
}

std::vector<std::size_t> parse_counts(std::string_view text,
                                      std::string_view what) {
  std::vector<std::size_t> values;
  for (const auto& item : split_list(text, ',')) {
    values.push_back(parse_number<std::size_t>(item, what));
  }
  if (values.empty()) {
    throw UsageError("empty " + std::string(what) + " list");
  }
  return values;
}

// "synthetic:<kind>[:key=value,...]"
Dataset generate_synthetic(std::string_view source, std::uint64_t default_seed,
                           json& info) {
  auto fields = split_list(source, ':');
  if (fields.size() < 2 || fields.size() > 3 || fields[0] != "synthetic") {
    throw UsageError("expected synthetic:<kind>[:key=value,...], got '" +
                     std::string(source) + "'");
  }
  const std::string kind = fields[1];
  std::map<std::string, std::string> params;
  if (fields.size() == 3) {
    for (const auto& kv : split_list(fields[2], ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw UsageError("synthetic parameter '" + kv + "' is not key=value");
      }
      params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  auto take = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    double v = parse_number<double>(it->second, key);
    params.erase(it);
    return v;
  };
  auto take_count = [&](const std::string& key, std::size_t fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    auto v = parse_number<std::size_t>(it->second, key);
    params.erase(it);
    return v;
  };
  const std::uint64_t seed = take_count("seed", default_seed);
  const std::size_t n = take_count("n", 2000);
  json gen = {{"kind", kind}, {"n", n}, {"seed", seed}};
  std::optional<Dataset> ds;
  if (kind == "blobs") {
    const std::size_t d = take_count("d", 16);
    const std::size_t c = take_count("c", 4);
    const double sigma = take("sigma", 1.0);
    const double separation = take("separation", 10.0 * sigma);
    gen.update({{"d", d}, {"c", c}, {"sigma", sigma}, {"separation", separation}});
    ds.emplace(generate_blobs(n, d, c, separation, sigma, seed));
  } else if (kind == "moons") {
    const double noise = take("noise", 0.05);
    gen["noise"] = noise;
    ds.emplace(generate_moons(n, noise, seed));
  } else if (kind == "circles") {
    const double factor = take("factor", 0.5);
    const double noise = take("noise", 0.05);
    gen.update({{"factor", factor}, {"noise", noise}});
    ds.emplace(generate_circles(n, factor, noise, seed));
  } else {
    throw UsageError("unknown synthetic kind '" + kind + "'");
  }
  if (!params.empty()) {
    throw UsageError("unknown " + kind + " parameter '" +
                     params.begin()->first + "'");
  }
  info["generator"] = gen;
  return std::move(*ds);
}

Dataset load_any(const std::string& path, std::string format,
                 std::uint64_t seed, json& info) {
  if (format.rfind("synthetic", 0) == 0) {
    return generate_synthetic(format.size() > 9 ? format : path, seed, info);
  }
  if (path.rfind("synthetic:", 0) == 0) {
    return generate_synthetic(path, seed, info);
  }
  if (format.empty()) {
    const auto ext = fs::path(path).extension().string();
    if (ext == ".fvecs") {
      format = "fvecs";
    } else if (ext == ".csv") {
      format = "csv";
    } else {
      throw UsageError("cannot infer the format of '" + path +
                       "'; pass --format");
    }
  }
  if (!fs::exists(path)) throw InputError("no such file: " + path);
  if (format == "fvecs") return read_fvecs(path);
  if (format == "csv") return read_csv(path);
  throw UsageError("unknown format '" + format + "'");
}

// The training side every subcommand works on, plus held-out queries when a
// query file or a split fraction is given. Both are standardized with the
// training statistics unless disabled.
struct Prepared {
  std::shared_ptr<const Dataset> train;
  std::optional<Dataset> queries;
  Metric metric = Metric::kEuclidean;
  json info;
};

Prepared prepare(const Options& o, bool need_queries) {
  if (o.dataset.empty() && o.format.rfind("synthetic", 0) != 0) {
    throw UsageError("--dataset is required");
  }
  Prepared p;
  p.metric = parse_metric(o.metric);
  Dataset all = load_any(o.dataset, o.format, o.seed, p.info);
  std::optional<Dataset> train;
  if (!o.queries.empty()) {
    json qinfo;
    p.queries.emplace(load_any(o.queries, "", o.seed, qinfo));
    train.emplace(std::move(all));
  } else if (o.query_fraction > 0.0) {
    Split s = split(all, o.query_fraction, o.split_seed);
    train.emplace(std::move(s.train));
    p.queries.emplace(std::move(s.queries));
  } else {
    train.emplace(std::move(all));
  }
  if (need_queries && !p.queries) {
    throw UsageError("evaluation needs --queries or a positive --query-fraction");
  }
  if (p.queries && p.queries->dim() != train->dim()) {
    throw InputError("queries have dimension " +
                     std::to_string(p.queries->dim()) + ", dataset has " +
                     std::to_string(train->dim()));
  }
  if (!o.no_standardize) {
    Standardized st = standardize(*train);
    if (p.queries) p.queries.emplace(st.transform.apply(*p.queries));
    train.emplace(std::move(st.data));
  }
  p.info["train_points"] = train->size();
  p.info["dim"] = train->dim();
  p.info["queries"] = p.queries ? p.queries->size() : 0;
  p.info["train_checksum"] = train->checksum();
  p.train = std::make_shared<const Dataset>(std::move(*train));
  return p;
}

KnnMatrix obtain_knn(const Options& o, const Dataset& train, Metric metric,
                     json& info) {
  if (!o.knn_cache.empty() && fs::exists(o.knn_cache)) {
    KnnMatrix m = load_knn_cache(o.knn_cache, train.checksum());
    if (m.k != o.k_prime) {
      throw UsageError("k' cache " + o.knn_cache + " holds k'=" +
                       std::to_string(m.k) + ", requested " +
                       std::to_string(o.k_prime));
    }
    info["knn_source"] = "cache";
    return m;
  }
  KnnMatrix m = build_knn_matrix(train, o.k_prime, metric);
  if (!o.knn_cache.empty()) save_knn_cache(m, o.knn_cache);
  info["knn_source"] = "computed";
  return m;
}

Architecture architecture(const Options& o, std::size_t d, std::size_t bins) {
  Architecture a = parse_arch(o.arch) == ArchKind::kMlp
                       ? Architecture::mlp(d, bins, o.hidden, o.dropout)
                       : Architecture::logistic(d, bins);
  a.validate();
  return a;
}

TrainConfig train_config(const Options& o) {
  TrainConfig c;
  c.eta = o.eta;
  c.epochs = o.epochs;
  c.batch_fraction = o.batch_fraction;
  c.learning_rate = o.learning_rate;
  c.k_prime = o.k_prime;
  c.seed = o.seed;
  if (o.targets == "argmax") {
    c.target_mode = TargetMode::kArgmax;
  } else if (o.targets == "soft") {
    c.target_mode = TargetMode::kSoft;
  } else {
    throw UsageError("--targets must be argmax or soft");
  }
  c.validate();
  return c;
}

json arch_json(const Architecture& a) {
  return {{"arch", std::string(arch_name(a.kind))},
          {"input_dim", a.input_dim},
          {"hidden", a.hidden_dim},
          {"bins", a.bins},
          {"dropout", a.dropout}};
}

// Bins of the index described by the flags: the fanout product for a
// hierarchy, --m otherwise.
std::size_t resolved_bins(const Options& o, bool m_given) {
  if (o.fanouts.empty()) return o.m;
  std::size_t product = 1;
  for (auto f : parse_counts(o.fanouts, "fanouts")) product *= f;
  if (m_given && product != o.m) {
    throw UsageError("--m " + std::to_string(o.m) +
                     " disagrees with the fanout product " +
                     std::to_string(product));
  }
  return product;
}

struct Built {
  std::string method;
  std::variant<AnyIndex, KMeansIndex> index;
  const Searcher& searcher() const {
    if (auto* a = std::get_if<AnyIndex>(&index)) return as_searcher(*a);
    return std::get<KMeansIndex>(index);
  }
};

Built build_method(const std::string& method, const Options& o,
                   const Prepared& p, const KnnMatrix* knn, bool m_given,
                   json& info) {
  const std::size_t d = p.train->dim();
  json entry = {{"method", method}};
  if (method == "kmeans") {
    entry.update({{"m", o.m}, {"max_iters", o.kmeans_iters}, {"seed", o.seed}});
    info["methods"].push_back(entry);
    return {method, KMeansIndex(kmeans_partition(*p.train, o.m, o.kmeans_iters,
                                                 o.seed),
                                p.train, p.metric)};
  }
  const TrainConfig cfg = train_config(o);
  entry["train"] = json::parse(cfg.to_json());
  if (method == "usp") {
    Architecture a = architecture(o, d, o.m);
    entry["model"] = arch_json(a);
    info["methods"].push_back(entry);
    TrainResult r = train(*p.train, *knn, a, cfg);
    return {method, AnyIndex(FlatIndex(std::move(r.model), p.train, p.metric))};
  }
  if (method == "ensemble") {
    const std::size_t e = std::max<std::size_t>(o.ensemble, 1);
    Architecture a = architecture(o, d, o.m);
    entry.update({{"model", arch_json(a)},
                  {"members", e},
                  {"probe", o.union_probe ? "union" : "most_confident"}});
    info["methods"].push_back(entry);
    EnsembleIndex ens = train_ensemble(p.train, *knn, a, cfg, e, p.metric);
    if (o.union_probe) ens.set_mode(EnsembleQueryMode::kUnion);
    return {method, AnyIndex(std::move(ens))};
  }
  if (method == "hier") {
    if (o.fanouts.empty()) throw UsageError("method hier needs --fanouts");
    auto fanouts = parse_counts(o.fanouts, "fanouts");
    resolved_bins(o, m_given);
    Architecture a = architecture(o, d, fanouts.front());
    entry.update({{"model", arch_json(a)}, {"fanouts", fanouts}});
    info["methods"].push_back(entry);
    return {method, AnyIndex(build_hierarchical(p.train, a, cfg, fanouts,
                                                p.metric, knn))};
  }
  throw UsageError("unknown method '" + method +
                   "' (expected usp, ensemble, hier or kmeans)");
}

// Output sink: --out path when given, otherwise the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw Error("cannot open " + path + " for writing");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void echo(std::ostream& err, const std::string& command, const json& info) {
  json j = info;
  j["command"] = command;
  err << j.dump() << '\n';
}

std::vector<std::size_t> m_prime_grid(const Options& o, std::size_t bins) {
  if (o.m_prime.empty()) return default_m_prime_grid(bins);
  auto grid = parse_counts(o.m_prime, "m-prime");
  for (auto v : grid) {
    if (v < 1 || v > bins) {
      throw UsageError("m' = " + std::to_string(v) + " outside [1, " +
                       std::to_string(bins) + "]");
    }
  }
  return grid;
}

std::vector<CurveRow> curve_rows(const Built& b, const Options& o,
                                 const Prepared& p, const GroundTruth& gt) {
  const Searcher& s = b.searcher();
  auto grid = m_prime_grid(o, s.num_bins());
  std::vector<CurveRow> rows;
  for (const auto& point : sweep_curve(s, *p.queries, gt, o.k, grid)) {
    rows.push_back({b.method, s.num_bins(), o.k, o.seed, point});
  }
  return rows;
}

std::string method_of(const AnyIndex& index) {
  switch (index_kind(index)) {
    case IndexKind::kFlat:
      return "usp";
    case IndexKind::kEnsemble:
      return "ensemble";
    case IndexKind::kHierarchical:
      return "hier";
  }
  return "usp";
}

void add_data_options(CLI::App* sub, Options& o) {
  sub->add_option("--dataset", o.dataset,
                  "fvecs or csv file, or synthetic:<kind>[:key=value,...]");
  sub->add_option("--format", o.format, "fvecs, csv or synthetic:...");
  sub->add_option("--queries", o.queries,
                  "held-out query file; disables the random split");
  sub->add_option("--query-fraction", o.query_fraction,
                  "fraction of the dataset held out as queries")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--split-seed", o.split_seed, "seed of the query split");
  sub->add_flag("--no-standardize", o.no_standardize,
                "use raw coordinates instead of train-set z-scores");
  sub->add_option("--metric", o.metric, "euclidean or squared_euclidean");
  sub->add_option("--seed", o.seed, "seed for generation and training");
}

void add_knn_options(CLI::App* sub, Options& o) {
  sub->add_option("--k-prime", o.k_prime, "neighbors per point in the k'-NN matrix")
      ->check(CLI::PositiveNumber);
  sub->add_option("--knn-cache", o.knn_cache,
                  "k'-NN cache file, read when present and written otherwise");
}

void add_train_options(CLI::App* sub, Options& o) {
  sub->add_option("--m", o.m, "number of bins")->check(CLI::Range(2, 1 << 20));
  sub->add_option("--arch", o.arch, "logreg or mlp");
  sub->add_option("--hidden", o.hidden, "hidden units (mlp)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--dropout", o.dropout, "dropout rate (mlp)");
  sub->add_option("--eta", o.eta, "balance weight");
  sub->add_option("--epochs", o.epochs, "training epochs");
  sub->add_option("--batch-fraction", o.batch_fraction,
                  "fraction of the dataset per mini-batch");
  sub->add_option("--learning-rate", o.learning_rate, "Adam step size");
  sub->add_option("--targets", o.targets, "argmax or soft neighbor targets");
}

void add_index_options(CLI::App* sub, Options& o) {
  sub->add_option("--ensemble", o.ensemble, "ensemble members (1 = flat)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--union-probe", o.union_probe,
                "probe the union of all ensemble members");
  sub->add_option("--fanouts", o.fanouts,
                  "comma list of per-level fanouts for a hierarchical index");
}

void add_eval_options(CLI::App* sub, Options& o) {
  sub->add_option("--k", o.k, "neighbors per query")->check(CLI::PositiveNumber);
  sub->add_option("--m-prime", o.m_prime, "probed bins, single value or comma list");
  sub->add_option("--kmeans-iters", o.kmeans_iters, "Lloyd iteration cap")
      ->check(CLI::PositiveNumber);
}

int gen_data(const Options& o, std::ostream& out, std::ostream& err) {
  json info;
  const std::string source = o.format.rfind("synthetic", 0) == 0 ? o.format
                                                                 : o.dataset;
  if (source.rfind("synthetic", 0) != 0) {
    throw UsageError("gen-data needs --dataset or --format synthetic:<kind>...");
  }
  Dataset ds = generate_synthetic(source, o.seed, info);
  info["out"] = o.out.empty() ? "stdout" : o.out;
  echo(err, "gen-data", info);
  if (!o.out.empty() && fs::path(o.out).extension() == ".fvecs") {
    write_fvecs(o.out, ds);
    return 0;
  }
  Sink sink(o.out, out);
  write_csv(*sink, ds);
  return 0;
}

int build_knn(const Options& o, std::ostream& err) {
  const std::string path = o.knn_cache.empty() ? o.out : o.knn_cache;
  if (path.empty()) throw UsageError("build-knn needs --knn-cache or --out");
  Prepared p = prepare(o, false);
  json info = p.info;
  info["k_prime"] = o.k_prime;
  info["metric"] = std::string(metric_name(p.metric));
  info["out"] = path;
  echo(err, "build-knn", info);
  save_knn_cache(build_knn_matrix(*p.train, o.k_prime, p.metric), path);
  return 0;
}

int train_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw UsageError("train needs --out for the model file");
  Prepared p = prepare(o, false);
  json info = p.info;
  const TrainConfig cfg = train_config(o);
  const Architecture a = architecture(o, p.train->dim(), o.m);
  KnnMatrix knn = obtain_knn(o, *p.train, p.metric, info);
  info["train"] = json::parse(cfg.to_json());
  info["model"] = arch_json(a);
  info["out"] = o.out;
  echo(err, "train", info);
  TrainResult r = train(*p.train, knn, a, cfg);
  save_model(r.model, o.out);
  Sink sink(o.log, out);
  write_training_log(*sink, r.report, cfg, a);
  return 0;
}

int build_index(const Options& o, bool m_given, std::ostream& err) {
  if (o.out.empty()) throw UsageError("build-index needs --out");
  if (o.ensemble > 1 && !o.fanouts.empty()) {
    throw UsageError("--ensemble and --fanouts cannot be combined");
  }
  Prepared p = prepare(o, false);
  json info = p.info;
  std::optional<AnyIndex> index;
  if (!o.model.empty()) {
    if (o.ensemble > 1 || !o.fanouts.empty()) {
      throw UsageError("--model builds a flat index only");
    }
    PartitionerModel model = load_model(o.model);
    if (model.arch().input_dim != p.train->dim()) {
      throw InputError("model expects dimension " +
                       std::to_string(model.arch().input_dim) +
                       ", dataset has " + std::to_string(p.train->dim()));
    }
    info["model"] = arch_json(model.arch());
    info["model_file"] = o.model;
    info["out"] = o.out;
    echo(err, "build-index", info);
    index.emplace(FlatIndex(std::move(model), p.train, p.metric));
  } else {
    KnnMatrix knn = obtain_knn(o, *p.train, p.metric, info);
    const std::string method = !o.fanouts.empty() ? "hier"
                               : o.ensemble > 1   ? "ensemble"
                                                  : "usp";
    info["out"] = o.out;
    info["methods"] = json::array();
    Built b = build_method(method, o, p, &knn, m_given, info);
    echo(err, "build-index", info);
    index.emplace(std::move(std::get<AnyIndex>(b.index)));
  }
  save_index(*index, o.out);
  return 0;
}

int eval_cmd(const Options& o, bool m_given, std::ostream& out,
             std::ostream& err) {
  Prepared p = prepare(o, true);
  json info = p.info;
  info["k"] = o.k;
  std::optional<Built> built;
  if (!o.index.empty()) {
    AnyIndex idx = load_index(o.index, p.train);
    info["index"] = o.index;
    info["methods"] = json::array({json{{"method", method_of(idx)}}});
    std::string method = method_of(idx);
    built.emplace(Built{method, std::move(idx)});
  } else {
    if (o.ensemble > 1 && !o.fanouts.empty()) {
      throw UsageError("--ensemble and --fanouts cannot be combined");
    }
    const std::string method = !o.fanouts.empty() ? "hier"
                               : o.ensemble > 1   ? "ensemble"
                                                  : "usp";
    KnnMatrix knn = obtain_knn(o, *p.train, p.metric, info);
    info["methods"] = json::array();
    built.emplace(build_method(method, o, p, &knn, m_given, info));
  }
  info["m_prime"] = m_prime_grid(o, built->searcher().num_bins());
  echo(err, "eval", info);
  GroundTruth gt = ground_truth(*p.train, *p.queries, o.k, p.metric);
  auto rows = curve_rows(*built, o, p, gt);
  Sink sink(o.out, out);
  write_curve_csv(*sink, rows);
  return 0;
}

int compare_cmd(const Options& o, bool m_given, std::ostream& out,
                std::ostream& err) {
  auto methods = split_list(o.methods, ',');
  if (methods.empty()) throw UsageError("--methods is empty");
  Prepared p = prepare(o, true);
  json info = p.info;
  info["k"] = o.k;
  info["methods"] = json::array();
  bool learned = std::any_of(methods.begin(), methods.end(),
                             [](const auto& m) { return m != "kmeans"; });
  std::optional<KnnMatrix> knn;
  if (learned) knn.emplace(obtain_knn(o, *p.train, p.metric, info));
  // One ground truth shared by every method.
  GroundTruth gt = ground_truth(*p.train, *p.queries, o.k, p.metric);
  std::vector<Built> built;
  for (const auto& method : methods) {
    built.push_back(build_method(method, o, p, knn ? &*knn : nullptr, m_given,
                                 info));
  }
  echo(err, "compare", info);
  std::vector<CurveRow> rows;
  for (const auto& b : built) {
    auto r = curve_rows(b, o, p, gt);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  Sink sink(o.out, out);
  write_curve_csv(*sink, rows);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Learned space partitioning for nearest neighbor search",
               "uspann"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "write a synthetic dataset");
  gen->add_option("--dataset", o.dataset, "synthetic:<kind>[:key=value,...]");
  gen->add_option("--format", o.format, "synthetic:<kind>[:key=value,...]");
  gen->add_option("--seed", o.seed, "generator seed");
  gen->add_option("--out", o.out, "csv or .fvecs path (default: csv on stdout)");

  auto* knn = app.add_subcommand("build-knn", "compute and cache the k'-NN matrix");
  add_data_options(knn, o);
  add_knn_options(knn, o);
  knn->add_option("--out", o.out, "cache path when --knn-cache is absent");

  auto* tr = app.add_subcommand("train", "train a partitioner and save it");
  add_data_options(tr, o);
  add_knn_options(tr, o);
  add_train_options(tr, o);
  tr->add_option("--out", o.out, "model file");
  tr->add_option("--log", o.log, "training log CSV (default: stdout)");

  auto* bi = app.add_subcommand("build-index", "build and save an index");
  add_data_options(bi, o);
  add_knn_options(bi, o);
  add_train_options(bi, o);
  add_index_options(bi, o);
  bi->add_option("--model", o.model, "trained model for a flat index");
  bi->add_option("--out", o.out, "index file");

  auto* ev = app.add_subcommand("eval", "recall versus candidates for one index");
  add_data_options(ev, o);
  add_knn_options(ev, o);
  add_train_options(ev, o);
  add_index_options(ev, o);
  add_eval_options(ev, o);
  ev->add_option("--index", o.index, "saved index (otherwise one is trained)");
  ev->add_option("--out", o.out, "curve CSV (default: stdout)");

  auto* cmp = app.add_subcommand("compare", "curves of several methods");
  add_data_options(cmp, o);
  add_knn_options(cmp, o);
  add_train_options(cmp, o);
  add_index_options(cmp, o);
  add_eval_options(cmp, o);
  cmp->add_option("--methods", o.methods,
                  "comma list of usp, ensemble, hier, kmeans");
  cmp->add_option("--out", o.out, "curve CSV (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  auto given = [](CLI::App* sub) { return sub->count("--m") > 0; };
  try {
    if (*gen) return gen_data(o, out, err);
    if (*knn) return build_knn(o, err);
    if (*tr) return train_cmd(o, out, err);
    if (*bi) return build_index(o, given(bi), err);
    if (*ev) return eval_cmd(o, given(ev), out, err);
    if (*cmp) {
      if (!cmp->count("--ensemble")) o.ensemble = 3;
      return compare_cmd(o, given(cmp), out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace uspann::cli
