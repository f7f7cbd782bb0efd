#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reports.hpp"
#include "segdiag/baseline.hpp"
#include "segdiag/crossdata.hpp"
#include "segdiag/diagnosis.hpp"
#include "segdiag/measures.hpp"
#include "segdiag/parallel.hpp"
#include "segdiag/selection.hpp"
#include "segdiag/stats.hpp"
#include "segdiag/utf8.hpp"
#include "workspace.hpp"

namespace segdiag::cli {

namespace {

using nlohmann::json;

std::optional<CharMap> load_optional_map(const std::filesystem::path& path) {
  if (path.empty()) return std::nullopt;
  return load_char_map(path);
}

std::vector<Sentence> load_sentences(const std::filesystem::path& path, const CharMap* map) {
  const ParsedFile parsed = parse_segmented_file(path, map);
  if (parsed.blank_lines_skipped > 0) {
    std::cerr << "warning: " << path.string() << ": skipped " << parsed.blank_lines_skipped
              << " whitespace-only line(s)\n";
  }
  if (parsed.sentences.empty()) throw ValidationError(path.string() + " contains no sentences");
  return parsed.sentences;
}

Attribute parse_attribute(const std::string& name) {
  const auto attr = attribute_from_name(name);
  if (!attr) throw ValidationError("unknown attribute: " + name);
  return *attr;
}

SlenUnit parse_slen_unit(const std::string& name) {
  const auto unit = slen_unit_from_name(name);
  if (!unit) throw ValidationError("--slen-unit must be char or word");
  return *unit;
}

void emit(const std::filesystem::path& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

std::pair<std::string, std::filesystem::path> split_named_path(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) {
    return {std::filesystem::path(arg).stem().string(), arg};
  }
  if (eq == 0 || eq + 1 == arg.size()) throw ValidationError("malformed NAME=PATH argument: " + arg);
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

json optional_json(const std::optional<double>& v) {
  return v.has_value() ? json(*v) : json(nullptr);
}

// ---------------------------------------------------------------------------
// attrs
// ---------------------------------------------------------------------------

struct AttrsArgs {
  std::string train, test, map, out;
  std::string slen_unit = "char";
};

int cmd_attrs(const AttrsArgs& args) {
  const auto map = load_optional_map(args.map);
  const CharMap* map_ptr = map ? &*map : nullptr;
  const auto train = load_sentences(args.train, map_ptr);
  const auto test = load_sentences(args.test, map_ptr);
  const TrainingStats stats = build_training_stats(train);
  const SlenUnit unit = parse_slen_unit(args.slen_unit);

  std::ostringstream tsv;
  tsv << "sentence_index\tstart\tend\ttext\twLen\tsLen\toDen\twFre\tcFre\twCon\tcCon\n";
  for (const Span& span : extract_spans(test)) {
    const AttributeVector v = attribute_vector(span, test[span.sentence_index], stats, unit);
    tsv << span.sentence_index << '\t' << span.range.start << '\t' << span.range.end << '\t'
        << span.text << '\t' << static_cast<long long>(v.wlen) << '\t'
        << static_cast<long long>(v.slen) << '\t' << format_ratio(v.oden) << '\t'
        << format_ratio(v.wfre) << '\t' << format_ratio(v.cfre) << '\t' << format_ratio(v.wcon)
        << '\t' << format_ratio(v.ccon) << '\n';
  }
  emit(args.out, tsv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string train, gold, map;
  std::vector<std::string> preds;
  std::string attribute = "all";
  std::size_t buckets = 3;
  std::string slen_unit = "char";
  std::string dataset;
  std::string report_out, tensor_out;
};

struct SpanValues {
  std::vector<Span> spans;
  std::vector<AttributeVector> attrs;

  std::vector<double> values(Attribute a) const {
    std::vector<double> out(attrs.size());
    for (std::size_t i = 0; i < attrs.size(); ++i) out[i] = attribute_value(attrs[i], a);
    return out;
  }
};

SpanValues annotate(const std::vector<Sentence>& sentences, const std::vector<Sentence>& context,
                    const TrainingStats& stats, SlenUnit unit) {
  SpanValues out;
  out.spans = extract_spans(sentences);
  out.attrs.resize(out.spans.size());
  parallel_for(out.spans.size(), [&](std::size_t i) {
    out.attrs[i] = attribute_vector(out.spans[i], context[out.spans[i].sentence_index], stats, unit);
  });
  return out;
}

void warn_reduced_buckets(const BucketSpec& spec, std::size_t requested) {
  if (spec.size() < requested) {
    std::cerr << "warning: attribute " << attribute_name(spec.attribute) << " has only "
              << spec.size() << " distinct bucket(s); requested " << requested << "\n";
  }
}

int cmd_eval(const EvalArgs& args) {
  if (args.buckets < 2) throw ValidationError("--buckets must be >= 2");
  if (args.report_out.empty() && args.tensor_out.empty()) {
    throw ValidationError("nothing to do: pass --report and/or --tensor");
  }
  if (!args.report_out.empty() && args.preds.size() != 1) {
    throw ValidationError("--report expects exactly one --pred");
  }
  const SlenUnit unit = parse_slen_unit(args.slen_unit);
  const Attribute report_attr =
      args.attribute == "all" ? Attribute::kWLen : parse_attribute(args.attribute);

  const auto map = load_optional_map(args.map);
  const CharMap* map_ptr = map ? &*map : nullptr;
  const auto train = load_sentences(args.train, map_ptr);
  const auto gold = load_sentences(args.gold, map_ptr);
  const TrainingStats stats = build_training_stats(train);

  std::vector<std::string> model_names;
  std::vector<std::vector<Sentence>> model_sentences;
  std::set<std::string> seen;
  for (const std::string& arg : args.preds) {
    auto [name, path] = split_named_path(arg);
    if (!seen.insert(name).second) throw ValidationError("duplicate model name: " + name);
    model_names.push_back(name);
    model_sentences.push_back(load_sentences(path, map_ptr));
    require_aligned(gold, model_sentences.back());
  }

  const std::string dataset =
      args.dataset.empty() ? std::filesystem::path(args.gold).stem().string() : args.dataset;

  const json config = {{"buckets_requested", args.buckets},
                       {"dataset", dataset},
                       {"gold", args.gold},
                       {"slen_unit", std::string(slen_unit_name(unit))},
                       {"train", args.train}};

  const SpanValues gold_sv = annotate(gold, gold, stats, unit);

  if (!args.report_out.empty()) {
    const SpanValues pred_sv = annotate(model_sentences[0], gold, stats, unit);
    const Prf corpus = corpus_f1_spans(gold_sv.spans, pred_sv.spans);

    const auto eval_one = [&](Attribute attr) {
      const std::vector<double> gv = gold_sv.values(attr);
      const BucketSpec spec = make_buckets(gv, args.buckets, attr);
      warn_reduced_buckets(spec, args.buckets);
      return attribute_report_json(spec, bucket_f1(gold_sv.spans, gv, pred_sv.spans,
                                                   pred_sv.values(attr), spec));
    };

    json report;
    report["schema_version"] = 1;
    report["corpus"] = prf_json(corpus);
    json cfg = config;
    cfg["model"] = model_names[0];
    cfg["attribute"] = args.attribute;
    report["config"] = cfg;
    if (args.attribute == "all") {
      json blocks = json::array();
      for (const Attribute attr : kAllAttributes) blocks.push_back(eval_one(attr));
      report["attributes"] = std::move(blocks);
    } else {
      report.update(eval_one(report_attr));
    }
    emit(args.report_out, dump_report(report));
  }

  if (!args.tensor_out.empty()) {
    std::vector<ModelPrediction> models;
    for (std::size_t i = 0; i < model_names.size(); ++i) {
      models.push_back({model_names[i], &model_sentences[i]});
    }
    const PerformanceTensor tensor = build_tensor(gold, stats, models, args.buckets, unit);
    for (const auto& spec : tensor.specs) warn_reduced_buckets(spec, args.buckets);

    std::vector<double> mu;
    for (const Attribute attr : tensor.attributes) mu.push_back(alpha_mu(gold_sv.attrs, attr));
    emit(args.tensor_out,
         dump_report(tensor_json(tensor, dataset, args.buckets, unit, mu, gold_sv.spans.size())));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// measures
// ---------------------------------------------------------------------------

struct MeasuresArgs {
  std::vector<std::string> tensors;
  std::string out;
  bool significance = false;
  double alpha = 0.05;
};

int cmd_measures(const MeasuresArgs& args) {
  if (args.tensors.empty()) throw ValidationError("need at least one --tensor");

  std::vector<std::string> dataset_names;
  std::vector<TensorFile> files;
  for (const std::string& arg : args.tensors) {
    auto [name, path] = split_named_path(arg);
    TensorFile file = parse_tensor_file(path);
    const auto eq = arg.find('=');
    dataset_names.push_back(eq == std::string::npos ? file.dataset : name);
    files.push_back(std::move(file));
  }
  std::set<std::string> unique_names(dataset_names.begin(), dataset_names.end());
  if (unique_names.size() != dataset_names.size()) {
    throw ValidationError("duplicate dataset names across tensors");
  }
  for (const TensorFile& f : files) {
    if (f.tensor.models != files[0].tensor.models) {
      throw ValidationError("tensors disagree on the model list");
    }
    if (f.tensor.attributes != files[0].tensor.attributes) {
      throw ValidationError("tensors disagree on the attribute list");
    }
  }
  const std::vector<std::string>& models = files[0].tensor.models;
  const std::vector<Attribute>& attributes = files[0].tensor.attributes;
  const std::size_t n_attrs = attributes.size();

  json out;
  out["schema_version"] = 1;
  out["datasets"] = dataset_names;
  out["models"] = models;
  json attr_names = json::array();
  for (const Attribute a : attributes) attr_names.push_back(std::string(attribute_name(a)));
  out["attributes"] = attr_names;
  out["config"] = {{"alpha", args.alpha},
                   {"significance", args.significance},
                   {"tensors", args.tensors}};

  std::vector<ModelWiseTable> tables;
  tables.reserve(files.size());
  for (const TensorFile& f : files) tables.push_back(model_wise(f.tensor));

  json model_wise_json;
  json dataset_wise_json;
  for (std::size_t d = 0; d < files.size(); ++d) {
    json rho = json::array();
    json sigma = json::array();
    for (std::size_t i = 0; i < models.size(); ++i) {
      json rho_row = json::array();
      for (const auto& cell : tables[d].s_rho[i]) rho_row.push_back(optional_json(cell));
      rho.push_back(std::move(rho_row));
      sigma.push_back(tables[d].s_sigma[i]);
    }
    model_wise_json[dataset_names[d]] = {{"s_rho", std::move(rho)}, {"s_sigma", std::move(sigma)}};

    const DatasetWiseTable dw = dataset_wise(tables[d], files[d].alpha_mu);
    json mu, arho, aexcl;
    for (std::size_t j = 0; j < n_attrs; ++j) {
      const std::string name(attribute_name(attributes[j]));
      mu[name] = dw.alpha_mu[j];
      arho[name] = optional_json(dw.alpha_rho[j].value);
      aexcl[name] = dw.alpha_rho[j].excluded;
    }
    dataset_wise_json[dataset_names[d]] = {
        {"alpha_mu", std::move(mu)}, {"alpha_rho", std::move(arho)}, {"alpha_rho_excluded", std::move(aexcl)}};
  }
  out["model_wise"] = std::move(model_wise_json);
  out["dataset_wise"] = std::move(dataset_wise_json);

  // averages across datasets (the summary-table view); undefined Spearman
  // cells are skipped with an exclusion count, and the strict all-defined
  // mean is reported alongside
  {
    json rho_mean = json::array();
    json rho_strict = json::array();
    json rho_excluded = json::array();
    json sigma_mean = json::array();
    for (std::size_t i = 0; i < models.size(); ++i) {
      json mean_row = json::array(), strict_row = json::array(), excl_row = json::array(),
           sigma_row = json::array();
      for (std::size_t j = 0; j < n_attrs; ++j) {
        double sum = 0, sum_sigma = 0;
        std::size_t defined = 0;
        for (std::size_t d = 0; d < files.size(); ++d) {
          sum_sigma += tables[d].s_sigma[i][j];
          if (tables[d].s_rho[i][j]) {
            sum += *tables[d].s_rho[i][j];
            ++defined;
          }
        }
        excl_row.push_back(files.size() - defined);
        mean_row.push_back(defined > 0 ? json(sum / static_cast<double>(defined)) : json(nullptr));
        strict_row.push_back(defined == files.size() ? json(sum / static_cast<double>(files.size()))
                                                     : json(nullptr));
        sigma_row.push_back(sum_sigma / static_cast<double>(files.size()));
      }
      rho_mean.push_back(std::move(mean_row));
      rho_strict.push_back(std::move(strict_row));
      rho_excluded.push_back(std::move(excl_row));
      sigma_mean.push_back(std::move(sigma_row));
    }
    out["model_wise_avg"] = {{"s_rho", std::move(rho_mean)},
                             {"s_rho_all_defined", std::move(rho_strict)},
                             {"s_rho_excluded", std::move(rho_excluded)},
                             {"s_sigma", std::move(sigma_mean)}};
  }

  // radar normalization: divide each alpha_mu by the maximum across datasets
  {
    json radar;
    for (std::size_t j = 0; j < n_attrs; ++j) {
      double max_mu = 0;
      for (const TensorFile& f : files) max_mu = std::max(max_mu, f.alpha_mu[j]);
      const std::string name(attribute_name(attributes[j]));
      for (std::size_t d = 0; d < files.size(); ++d) {
        radar[dataset_names[d]][name] =
            max_mu > 0 ? json(files[d].alpha_mu[j] / max_mu) : json(nullptr);
      }
    }
    out["radar_alpha_mu"] = std::move(radar);
  }

  if (args.significance) {
    json per_dataset;
    for (std::size_t d = 0; d < files.size(); ++d) {
      json row;
      for (std::size_t j = 0; j < n_attrs; ++j) {
        const std::string name(attribute_name(attributes[j]));
        if (models.size() < 2 || files[d].tensor.specs[j].size() < 2) {
          row[name] = nullptr;
          continue;
        }
        std::vector<std::vector<double>> table;
        for (std::size_t i = 0; i < models.size(); ++i) table.push_back(files[d].tensor.values[i][j]);
        const FriedmanResult r = friedman(table);
        row[name] = {{"statistic", r.statistic}, {"p_value", r.p_value}, {"dof", r.dof}};
      }
      per_dataset[dataset_names[d]] = std::move(row);
    }

    json per_model;
    json flags;
    for (std::size_t i = 0; i < models.size(); ++i) {
      json row;
      json flag_row;
      for (std::size_t j = 0; j < n_attrs; ++j) {
        const std::string name(attribute_name(attributes[j]));
        bool consistent = files.size() >= 2;
        for (const TensorFile& f : files) {
          consistent = consistent && f.tensor.specs[j].size() == files[0].tensor.specs[j].size() &&
                       f.tensor.specs[j].size() >= 2;
        }
        if (!consistent) {
          row[name] = nullptr;
          flag_row[name] = nullptr;
          continue;
        }
        std::vector<std::vector<double>> table;
        for (const TensorFile& f : files) table.push_back(f.tensor.values[i][j]);
        const FriedmanResult r = friedman(table);
        row[name] = {{"statistic", r.statistic}, {"p_value", r.p_value}, {"dof", r.dof}};
        flag_row[name] = r.p_value >= args.alpha;  // true marks a not-significant cell
      }
      per_model[models[i]] = std::move(row);
      flags[models[i]] = std::move(flag_row);
    }
    out["significance"] = {{"alpha", args.alpha},
                           {"per_dataset", std::move(per_dataset)},
                           {"per_model", std::move(per_model)},
                           {"not_significant", std::move(flags)}};
  }

  emit(args.out, dump_report(out));
  return 0;
}

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

struct DiagnoseArgs {
  std::string self_run;
  std::vector<std::string> aided_runs;
  std::string out, tsv;
};

int cmd_diagnose(const DiagnoseArgs& args) {
  const bool self = !args.self_run.empty();
  const bool aided = !args.aided_runs.empty();
  if (self == aided) throw ValidationError("pass exactly one of --self or --aided");

  json out;
  out["schema_version"] = 1;
  std::ostringstream tsv;

  if (self) {
    const RunFile run = parse_run_file(args.self_run);
    const SelfDiagnosis diag = self_diagnose(run.slices);
    json blocks = json::array();
    tsv << "attribute\tworst_bucket\tworst_f1\tgap\n";
    for (const auto& e : diag) {
      blocks.push_back(json{{"attribute", e.attribute},
                            {"worst_bucket", e.worst_bucket_label},
                            {"worst_f1", e.worst_f1},
                            {"gap", e.gap}});
      tsv << e.attribute << '\t' << e.worst_bucket_label << '\t' << format_ratio(e.worst_f1) << '\t'
          << format_ratio(e.gap) << '\n';
    }
    out["attributes"] = std::move(blocks);
    out["config"] = {{"mode", "self"}, {"model", run.model}, {"run", args.self_run}};
  } else {
    if (args.aided_runs.size() != 2) throw ValidationError("--aided expects two run files");
    RunFile a = parse_run_file(args.aided_runs[0]);
    RunFile b = parse_run_file(args.aided_runs[1]);

    if (a.specs.size() != b.specs.size()) {
      throw ValidationError("aided runs disagree on the attribute set");
    }
    for (std::size_t j = 0; j < a.specs.size(); ++j) {
      if (a.specs[j].attribute != b.specs[j].attribute || a.specs[j].lower != b.specs[j].lower ||
          a.specs[j].labels != b.specs[j].labels) {
        throw ValidationError("aided runs were bucketed differently; re-run eval with shared gold");
      }
    }

    bool swapped = false;
    if (a.corpus.f1 < b.corpus.f1) {
      std::swap(a, b);
      swapped = true;
      std::cerr << "warning: holistic F1 of the first run is lower; models swapped so A is stronger\n";
    }

    const AidedDiagnosis diag = aided_diagnose(a.slices, b.slices);
    json blocks = json::array();
    tsv << "attribute\tbucket\tdelta\tmode\n";
    for (const auto& e : diag) {
      const std::string mode = e.mode == AidedMode::kALoses ? "A_loses" : "A_best";
      blocks.push_back(json{{"attribute", e.attribute},
                            {"bucket", e.bucket_label},
                            {"delta", e.delta},
                            {"mode", mode}});
      tsv << e.attribute << '\t' << e.bucket_label << '\t' << format_ratio(e.delta) << '\t' << mode
          << '\n';
    }
    out["attributes"] = std::move(blocks);
    out["config"] = {{"mode", "aided"},
                     {"model_a", a.model},
                     {"model_b", b.model},
                     {"corpus_f1_a", a.corpus.f1},
                     {"corpus_f1_b", b.corpus.f1},
                     {"swapped", swapped},
                     {"runs", args.aided_runs}};
  }

  emit(args.out, dump_report(out));
  if (!args.tsv.empty()) write_text_file(args.tsv, tsv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// cross
// ---------------------------------------------------------------------------

struct CrossArgs {
  std::string workspace;
  std::string out;
};

int cmd_cross(const CrossArgs& args) {
  const Workspace ws = load_workspace(args.workspace);
  if (ws.datasets.size() < 2) throw ValidationError("cross needs at least two datasets");
  const auto map = load_optional_map(ws.options.char_map);
  const CharMap* map_ptr = map ? &*map : nullptr;

  const std::size_t nd = ws.datasets.size();
  std::vector<TrainingStats> train_stats(nd);
  std::vector<std::vector<Sentence>> tests(nd);
  std::vector<TestTypeCounts> test_types(nd);
  parallel_for(nd, [&](std::size_t i) {
    if (ws.datasets[i].train.empty() || ws.datasets[i].test.empty()) {
      throw ValidationError("dataset " + ws.datasets[i].name + " needs both train and test for cross");
    }
    train_stats[i] = build_training_stats(parse_segmented_file(ws.datasets[i].train, map_ptr).sentences);
    tests[i] = load_sentences(ws.datasets[i].test, map_ptr);
    test_types[i] = count_test_types(extract_spans(tests[i]));
  });

  // model axis: sorted unique model names over the cross runs
  std::set<std::string> model_set;
  for (const auto& r : ws.cross_runs) model_set.insert(r.model);
  if (model_set.empty()) throw ValidationError("workspace has no cross_runs");
  std::vector<std::string> models(model_set.begin(), model_set.end());
  const auto model_index = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(models.begin(), models.end(), name) - models.begin());
  };

  std::vector<CrossCell> cells(ws.cross_runs.size());
  parallel_for(ws.cross_runs.size(), [&](std::size_t r) {
    const CrossRunEntry& run = ws.cross_runs[r];
    const std::size_t target = ws.dataset_index(run.target);
    const auto pred = load_sentences(run.pred, map_ptr);
    const Prf prf = corpus_f1(tests[target], pred);
    cells[r] = {ws.dataset_index(run.source), target, model_index(run.model), prf.f1};
  });

  std::vector<std::string> dataset_names;
  for (const auto& d : ws.datasets) dataset_names.push_back(d.name);
  const CrossTensor tensor = build_cross_tensor(dataset_names, models, cells);

  const PsiMatrix psi = build_psi_matrix(train_stats, test_types);

  json out;
  out["schema_version"] = 1;
  out["datasets"] = dataset_names;
  out["models"] = models;
  out["config"] = {{"workspace", args.workspace},
                   {"buckets", ws.options.buckets},
                   {"slen_unit", std::string(slen_unit_name(ws.options.slen_unit))}};

  json u = json::array(), u_hat = json::array();
  for (std::size_t i = 0; i < nd; ++i) {
    json u_row = json::array(), uh_row = json::array();
    for (std::size_t j = 0; j < nd; ++j) {
      json u_cell = json::array(), uh_cell = json::array();
      for (std::size_t k = 0; k < models.size(); ++k) {
        u_cell.push_back(optional_json(tensor.u[i][j][k]));
        uh_cell.push_back(optional_json(tensor.u_hat[i][j][k]));
      }
      u_row.push_back(std::move(u_cell));
      uh_row.push_back(std::move(uh_cell));
    }
    u.push_back(std::move(u_row));
    u_hat.push_back(std::move(uh_row));
  }
  out["u"] = std::move(u);
  out["u_hat"] = std::move(u_hat);

  out["psi"] = psi;
  {
    json x100 = json::array();
    for (const auto& row : psi) {
      json r = json::array();
      for (double v : row) r.push_back(v * 100.0);
      x100.push_back(std::move(r));
    }
    out["psi_x100"] = std::move(x100);
  }

  {
    json correlations;
    for (std::size_t k = 0; k < models.size(); ++k) {
      const CorrelationReport report = psi_u_correlation(psi, tensor, k);
      json per_target;
      for (std::size_t j = 0; j < nd; ++j) {
        per_target[dataset_names[j]] = optional_json(report.per_target[j]);
      }
      correlations[models[k]] = {{"per_target", std::move(per_target)},
                                 {"pooled", optional_json(report.pooled)}};
    }
    out["correlations"] = std::move(correlations);
  }

  {
    const auto edge_list = [&](const OptMatrix& w) {
      json edges = json::array();
      for (std::size_t i = 0; i < nd; ++i) {
        for (std::size_t j = i + 1; j < nd; ++j) {
          if (w[i][j].has_value()) {
            edges.push_back(
                json{{"a", dataset_names[i]}, {"b", dataset_names[j]}, {"weight", *w[i][j]}});
          }
        }
      }
      return edges;
    };

    OptMatrix u_mean(nd, std::vector<std::optional<double>>(nd));
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t j = 0; j < nd; ++j) {
        double sum = 0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < models.size(); ++k) {
          if (tensor.u[i][j][k]) {
            sum += *tensor.u[i][j][k];
            ++count;
          }
        }
        if (count > 0) u_mean[i][j] = sum / static_cast<double>(count);
      }
    }
    out["edges"] = {{"psi", edge_list(distance_edges(psi))},
                    {"u_mean", edge_list(distance_edges(u_mean))}};
  }

  // protocol test over the psi matrix: one block per training set, the
  // test sets are the treatments
  if (nd >= 2) {
    const FriedmanResult r = friedman(psi);
    out["friedman_psi"] = {{"statistic", r.statistic},
                           {"p_value", r.p_value},
                           {"dof", r.dof},
                           {"n_blocks", r.n_blocks},
                           {"k_treatments", r.k_treatments}};
  }

  out["coverage"] = {{"u_present", tensor.present_cells()}, {"u_total", tensor.total_cells()}};

  emit(args.out, dump_report(out));
  return 0;
}

// ---------------------------------------------------------------------------
// select
// ---------------------------------------------------------------------------

struct SelectArgs {
  std::string target;
  std::vector<std::string> sources;
  std::string strategy = "max";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string map;
  std::string out;
};

int cmd_select(const SelectArgs& args) {
  const auto strategy = select_strategy_from_name(args.strategy);
  if (!strategy) throw ValidationError("--strategy must be max, min or rand");
  const auto map = load_optional_map(args.map);
  const CharMap* map_ptr = map ? &*map : nullptr;

  const Corpus target = load_corpus(load_dataset_descriptor(args.target), map_ptr);
  std::vector<Corpus> sources;
  for (const std::string& path : args.sources) {
    sources.push_back(load_corpus(load_dataset_descriptor(path), map_ptr));
    if (sources.back().train.empty()) {
      throw ValidationError("source " + sources.back().name + " has no training data");
    }
  }

  const SelectionPlan plan = select_order(target, sources, *strategy, args.seed);

  json out;
  out["schema_version"] = 1;
  out["config"] = {{"strategy", args.strategy},
                   {"seed", *strategy == SelectStrategy::kRand ? json(args.seed) : json(nullptr)},
                   {"target", target.name},
                   {"target_path", args.target},
                   {"source_paths", args.sources}};
  out["sources"] = plan.source_names;
  json order = json::array();
  for (const std::size_t k : plan.order) order.push_back(plan.source_names[k]);
  out["order"] = std::move(order);
  out["order_indices"] = plan.order;
  out["scores"] = plan.scores;
  json steps = json::array();
  for (const auto& step : plan.steps) {
    json candidates;
    for (std::size_t k = 0; k < plan.source_names.size(); ++k) {
      candidates[plan.source_names[k]] = optional_json(step.candidate_scores[k]);
    }
    steps.push_back(json{{"chosen", plan.source_names[step.chosen]}, {"candidates", std::move(candidates)}});
  }
  out["steps"] = std::move(steps);

  emit(args.out, dump_report(out));
  return 0;
}

// ---------------------------------------------------------------------------
// segment
// ---------------------------------------------------------------------------

struct SegmentArgs {
  std::string dict_from, input, out, map;
};

int cmd_segment(const SegmentArgs& args) {
  const auto map = load_optional_map(args.map);
  const CharMap* map_ptr = map ? &*map : nullptr;
  const MatchDict dict = MatchDict::from_sentences(load_sentences(args.dict_from, map_ptr));

  std::ifstream in(args.input, std::ios::binary);
  if (!in) throw IoError("cannot open " + args.input);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  // keep only the character stream of each line; any prior segmentation of
  // the input is discarded before matching
  std::string out_text;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    std::string_view line;
    if (eol == std::string::npos) {
      line = std::string_view(bytes).substr(pos);
      pos = bytes.size();
    } else {
      line = std::string_view(bytes).substr(pos, eol - pos);
      pos = eol + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::u32string chars = utf8_decode(line);
    if (map_ptr) {
      for (char32_t& c : chars) {
        if (auto it = map_ptr->find(c); it != map_ptr->end()) c = it->second;
      }
    }
    std::u32string stream;
    for (char32_t c : chars) {
      if (!is_unicode_space(c)) stream.push_back(c);
    }
    if (stream.empty()) continue;
    out_text += segment_sentence_fmm(stream, dict).to_line();
    out_text.push_back('\n');
  }
  emit(args.out, out_text);
  return 0;
}

// ---------------------------------------------------------------------------
// friedman
// ---------------------------------------------------------------------------

struct FriedmanArgs {
  std::string table;
  bool exact = false;
  std::string out;
};

int cmd_friedman(const FriedmanArgs& args) {
  std::ifstream in(args.table, std::ios::binary);
  if (!in) throw IoError("cannot open " + args.table);
  std::vector<std::vector<double>> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<double> row;
    std::string token;
    while (ls >> token) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ValidationError(args.table + " line " + std::to_string(line_no) +
                              ": not a number: " + token);
      }
    }
    if (!row.empty()) table.push_back(std::move(row));
  }

  const FriedmanResult r = friedman(table);
  json out;
  out["schema_version"] = 1;
  out["statistic"] = r.statistic;
  out["dof"] = r.dof;
  out["p_value"] = r.p_value;
  out["n_blocks"] = r.n_blocks;
  out["k_treatments"] = r.k_treatments;
  out["exact_p"] = nullptr;
  if (args.exact) {
    if (r.n_blocks * r.k_treatments > 12) {
      throw ValidationError("--exact needs n*k <= 12 (got " +
                            std::to_string(r.n_blocks * r.k_treatments) + ")");
    }
    out["exact_p"] = friedman_exact_p(table);
  }
  out["config"] = {{"table", args.table}, {"exact", args.exact}};
  emit(args.out, dump_report(out));
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Attribute-aided evaluation and diagnosis of word segmentation systems"};
  app.require_subcommand(1);

  AttrsArgs attrs;
  auto* attrs_cmd = app.add_subcommand("attrs", "Per-word attribute table for a test set");
  attrs_cmd->add_option("--train", attrs.train, "training file (segmented text)")->required();
  attrs_cmd->add_option("--test", attrs.test, "test file (segmented text)")->required();
  attrs_cmd->add_option("--map", attrs.map, "two-column character mapping file");
  attrs_cmd->add_option("--slen-unit", attrs.slen_unit, "sentence length unit: char|word");
  attrs_cmd->add_option("--out", attrs.out, "output TSV (default stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Bucketed span-F1 evaluation");
  eval_cmd->add_option("--train", eval.train, "training file")->required();
  eval_cmd->add_option("--gold", eval.gold, "gold test file")->required();
  eval_cmd->add_option("--pred", eval.preds, "prediction file, repeatable as NAME=PATH")->required();
  eval_cmd->add_option("--attribute", eval.attribute, "one attribute name or 'all'");
  eval_cmd->add_option("--buckets", eval.buckets, "bucket count (>= 2)");
  eval_cmd->add_option("--slen-unit", eval.slen_unit, "sentence length unit: char|word");
  eval_cmd->add_option("--dataset", eval.dataset, "dataset name recorded in reports");
  eval_cmd->add_option("--map", eval.map, "two-column character mapping file");
  eval_cmd->add_option("--report", eval.report_out, "bucket report JSON (single --pred)");
  eval_cmd->add_option("--tensor", eval.tensor_out, "performance tensor JSON (any number of --pred)");

  MeasuresArgs measures;
  auto* measures_cmd = app.add_subcommand("measures", "Model-wise and dataset-wise measures");
  measures_cmd->add_option("--tensor", measures.tensors, "tensor JSON, repeatable as NAME=PATH")
      ->required();
  measures_cmd->add_option("--out", measures.out, "output JSON (default stdout)");
  measures_cmd->add_flag("--significance", measures.significance, "attach Friedman p-values");
  measures_cmd->add_option("--alpha", measures.alpha, "significance level (default 0.05)");

  DiagnoseArgs diagnose;
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Self- and aided-diagnosis of eval reports");
  diagnose_cmd->add_option("--self", diagnose.self_run, "eval report JSON of one model");
  diagnose_cmd->add_option("--aided", diagnose.aided_runs, "two eval report JSONs (A B)")
      ->expected(2);
  diagnose_cmd->add_option("--out", diagnose.out, "output JSON (default stdout)");
  diagnose_cmd->add_option("--tsv", diagnose.tsv, "bar-chart-ready TSV");

  CrossArgs cross;
  auto* cross_cmd = app.add_subcommand("cross", "Cross-dataset tensor, psi matrix and edges");
  cross_cmd->add_option("--workspace", cross.workspace, "workspace JSON")->required();
  cross_cmd->add_option("--out", cross.out, "output JSON (default stdout)");

  SelectArgs select;
  auto* select_cmd = app.add_subcommand("select", "Greedy source-domain ordering");
  select_cmd->add_option("--target", select.target, "target dataset descriptor JSON")->required();
  select_cmd->add_option("--sources", select.sources, "source dataset descriptor JSONs")
      ->required()
      ->expected(-1);
  select_cmd->add_option("--strategy", select.strategy, "max|min|rand");
  select_cmd->add_option("--seed", select.seed, "seed for rand")->capture_default_str();
  select_cmd->add_option("--map", select.map, "two-column character mapping file");
  select_cmd->add_option("--out", select.out, "plan JSON (default stdout)");

  SegmentArgs segment;
  auto* segment_cmd = app.add_subcommand("segment", "Forward maximum-matching baseline segmenter");
  segment_cmd->add_option("--dict-from", segment.dict_from, "segmented file that supplies the vocabulary")
      ->required();
  segment_cmd->add_option("--input", segment.input, "text to segment (existing spaces are ignored)")
      ->required();
  segment_cmd->add_option("--out", segment.out, "output segmented file (default stdout)");
  segment_cmd->add_option("--map", segment.map, "two-column character mapping file");

  FriedmanArgs friedman_args;
  auto* friedman_cmd = app.add_subcommand("friedman", "Friedman test over a TSV table");
  friedman_cmd->add_option("--table", friedman_args.table, "TSV with blocks as rows")->required();
  friedman_cmd->add_flag("--exact", friedman_args.exact, "add exact permutation p (n*k <= 12)");
  friedman_cmd->add_option("--out", friedman_args.out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (attrs_cmd->parsed()) return cmd_attrs(attrs);
    if (eval_cmd->parsed()) return cmd_eval(eval);
    if (measures_cmd->parsed()) return cmd_measures(measures);
    if (diagnose_cmd->parsed()) return cmd_diagnose(diagnose);
    if (cross_cmd->parsed()) return cmd_cross(cross);
    if (select_cmd->parsed()) return cmd_select(select);
    if (segment_cmd->parsed()) return cmd_segment(segment);
    if (friedman_cmd->parsed()) return cmd_friedman(friedman_args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.push_back("segdiag");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(storage.size());
  for (const auto& s : storage) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace segdiag::cli
