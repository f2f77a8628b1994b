#include "sicvpr/app.hpp"

#include "sicvpr/svg.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sicvpr {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

// Lowest index among the row maxima.
template <typename Row>
Index argmax(const Eigen::MatrixBase<Row>& row) {
  Index best = 0;
  for (Index i = 1; i < row.size(); ++i) {
    if (row.coeff(i) > row.coeff(best)) best = i;
  }
  return best;
}

SimilarityMatrix load_technique(const TechniqueInput& input) {
  if (!std::filesystem::exists(input.path)) {
    throw IoError("technique '" + input.id + "': no such file " + input.path.string());
  }
  auto m = load_matrix(input.path);
  if (input.distance) m = m.with_orientation(Orientation::kDistance);
  return as_similarity(m);
}

MatchDecision make_decision(Index q, std::size_t technique, const std::string& id,
                            const ConsistencyResult& r, double score,
                            ConfidenceSource confidence) {
  MatchDecision d;
  d.query = q;
  d.technique = technique;
  d.technique_id = id;
  d.match_index = r.match_index;
  d.theta = r.theta;
  d.confidence = confidence == ConfidenceSource::kTheta ? r.theta : score;
  return d;
}

void run_batch(const RunConfig& config, MatchOutput& out) {
  std::vector<Technique> techniques;
  for (const auto& input : config.techniques) techniques.push_back({input.id, load_technique(input)});
  const TechniqueSet set(std::move(techniques));
  const Index rows = set.rows();
  out.decisions.reserve(static_cast<std::size_t>(rows));

  switch (config.mode) {
    case Mode::kArgmax: {
      const ScaledMatrix m = config.scale ? zscore_rows(set[0].matrix) : set[0].matrix.values();
      for (Index q = 0; q < rows; ++q) {
        const auto start = Clock::now();
        ConsistencyResult r;
        r.match_index = argmax(m.row(q));
        r.theta = m(q, r.match_index);
        out.frame_ms.push_back(ms_since(start));
        out.decisions.push_back(make_decision(q, 0, set[0].id, r, r.theta, config.confidence));
      }
      break;
    }
    case Mode::kSic: {
      const ScaledMatrix m = config.scale ? zscore_rows(set[0].matrix) : set[0].matrix.values();
      std::vector<Index> candidates;
      for (Index q = 0; q < rows; ++q) {
        const auto start = Clock::now();
        top_k_candidates(m.row(q), config.sic.k, candidates);
        auto r = sic_evaluate(m, q, candidates, config.sic);
        out.frame_ms.push_back(ms_since(start));
        out.decisions.push_back(
            make_decision(q, 0, set[0].id, r, m(q, r.match_index), config.confidence));
        out.sic_results.push_back(std::move(r));
      }
      break;
    }
    case Mode::kMusic: {
      const MusicMatcher matcher(set, config.scale);
      for (Index q = 0; q < rows; ++q) {
        const auto start = Clock::now();
        out.decisions.push_back(matcher.match(q, config.sic, config.confidence));
        out.frame_ms.push_back(ms_since(start));
      }
      break;
    }
    case Mode::kSeqSlam: {
      const ScoreMatrix enhanced = contrast_enhance(set[0].matrix, config.seq.r_window);
      for (Index q = 0; q < rows; ++q) {
        const auto start = Clock::now();
        const auto r = trajectory_search(enhanced, q, config.seq);
        out.frame_ms.push_back(ms_since(start));
        out.decisions.push_back(
            make_decision(q, 0, set[0].id, r, -enhanced(q, r.match_index), config.confidence));
      }
      break;
    }
  }
}

void run_stream(const RunConfig& config, MatchOutput& out) {
  std::vector<MatrixRowReader> readers;
  std::vector<std::string> ids;
  for (const auto& input : config.techniques) {
    if (!std::filesystem::exists(input.path)) {
      throw IoError("technique '" + input.id + "': no such file " + input.path.string());
    }
    readers.emplace_back(input.path);
    ids.push_back(input.id);
    if (readers.back().cols() != readers.front().cols()) {
      throw ConfigError("technique '" + input.id + "' has " +
                        std::to_string(readers.back().cols()) + " columns, expected " +
                        std::to_string(readers.front().cols()));
    }
  }
  const Index cols = readers.front().cols();
  std::vector<ScoreVector> rows(readers.size());

  // Returns false when every reader is exhausted; a partial end is a shape error.
  const auto next_rows = [&]() {
    std::size_t got = 0;
    for (std::size_t t = 0; t < readers.size(); ++t) {
      if (readers[t].next(rows[t])) {
        ++got;
        if (config.techniques[t].distance) rows[t] = -rows[t];
      }
    }
    if (got != 0 && got != readers.size()) throw ConfigError("techniques differ in row count");
    return got != 0;
  };

  std::optional<SicStream> sic;
  std::optional<MusicStream> music;
  std::optional<SeqStream> seq;
  switch (config.mode) {
    case Mode::kSic: sic.emplace(cols, config.sic, config.scale); break;
    case Mode::kMusic: music.emplace(ids, cols, config.sic, config.scale); break;
    case Mode::kSeqSlam: seq.emplace(cols, config.seq); break;
    case Mode::kArgmax: break;
  }

  ScoreVector scaled;
  for (Index q = 0; next_rows(); ++q) {
    const auto start = Clock::now();
    switch (config.mode) {
      case Mode::kArgmax: {
        scaled = rows[0];
        if (config.scale) zscore_row(scaled, scaled);
        ConsistencyResult r;
        r.match_index = argmax(scaled);
        r.theta = scaled(r.match_index);
        out.decisions.push_back(make_decision(q, 0, ids[0], r, r.theta, config.confidence));
        break;
      }
      case Mode::kSic: {
        auto r = sic->push(rows[0]);
        out.decisions.push_back(
            make_decision(q, 0, ids[0], r, sic->latest_score(r.match_index), config.confidence));
        out.sic_results.push_back(std::move(r));
        break;
      }
      case Mode::kMusic: out.decisions.push_back(music->push(rows, config.confidence)); break;
      case Mode::kSeqSlam: {
        const auto r = seq->push(rows[0]);
        out.decisions.push_back(make_decision(q, 0, ids[0], r, -seq->latest_enhanced(r.match_index),
                                              config.confidence));
        break;
      }
    }
    out.frame_ms.push_back(ms_since(start));
  }
}

void write_run_echo(const RunConfig& config, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "mode=" << mode_name(config.mode) << '\n'
      << "k=" << config.sic.k << "\nf=" << config.sic.f << "\nw=" << config.sic.w << '\n'
      << "ds=" << config.seq.ds << "\nvmin=" << format_double(config.seq.v_min)
      << "\nvmax=" << format_double(config.seq.v_max)
      << "\nvstep=" << format_double(config.seq.v_step) << "\nrwindow=" << config.seq.r_window
      << '\n'
      << "scale=" << (config.scale ? "true" : "false") << '\n'
      << "stream=" << (config.stream ? "true" : "false") << '\n'
      << "confidence="
      << (config.confidence == ConfidenceSource::kTheta ? "theta" : "score") << '\n';
  for (const auto& t : config.techniques) {
    out << "technique=" << t.id << '=' << t.path.string() << (t.distance ? ":distance" : "")
        << '\n';
  }
}

void write_timing_csv(const std::vector<double>& ms, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "query_index,ms\n";
  for (std::size_t q = 0; q < ms.size(); ++q) out << q << ',' << format_double(ms[q]) << '\n';
}

std::optional<std::vector<double>> read_timing_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::vector<double> ms;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.starts_with("query_index")) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("bad timing line in " + path.string());
    ms.push_back(parse_double(std::string_view(line).substr(comma + 1)));
  }
  return ms;
}

std::vector<ScoredMatch> scored(const std::vector<MatchDecision>& decisions) {
  std::vector<ScoredMatch> out;
  out.reserve(decisions.size());
  for (const auto& d : decisions) out.push_back({d.query, d.match_index, d.confidence});
  return out;
}

void write_report_files(const EvalReport& report, const std::filesystem::path& dir) {
  write_pr_csv(report.pr_points, dir / "pr.csv");
  write_summary(report, dir / "summary.txt");
  write_summary_csv(report, dir / "summary.csv");
  ChartSeries pr{"PR", {}};
  for (const auto& p : report.pr_points) pr.points.emplace_back(p.recall, p.precision);
  write_line_chart_svg({"Precision-recall", "recall", "precision", false}, {pr}, dir / "pr.svg");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "sic") return Mode::kSic;
  if (name == "music") return Mode::kMusic;
  if (name == "seqslam") return Mode::kSeqSlam;
  if (name == "argmax") return Mode::kArgmax;
  throw ConfigError("unknown mode '" + name + "'");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::kSic: return "sic";
    case Mode::kMusic: return "music";
    case Mode::kSeqSlam: return "seqslam";
    case Mode::kArgmax: return "argmax";
  }
  return "?";
}

TechniqueInput parse_technique_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("technique must be id=path[:distance], got '" + spec + "'");
  }
  TechniqueInput t;
  t.id = spec.substr(0, eq);
  std::string path = spec.substr(eq + 1);
  constexpr std::string_view kSuffix = ":distance";
  if (path.size() > kSuffix.size() && path.ends_with(kSuffix)) {
    path.resize(path.size() - kSuffix.size());
    t.distance = true;
  }
  t.path = path;
  return t;
}

void RunConfig::validate() const {
  sic.validate();
  seq.validate();
  if (allowance < 0) throw ConfigError("allowance must be non-negative");
  if (techniques.empty()) throw ConfigError("at least one --technique is required");
  if (mode != Mode::kMusic && techniques.size() != 1) {
    throw ConfigError("mode " + mode_name(mode) + " takes exactly one technique");
  }
  for (const auto& t : techniques) {
    if (!std::filesystem::exists(t.path)) {
      throw IoError("technique '" + t.id + "': no such file " + t.path.string());
    }
  }
  if (gt && !std::filesystem::exists(*gt)) throw IoError("no such ground truth " + gt->string());
}

MatchOutput run_match(const RunConfig& config) {
  config.validate();
  MatchOutput out;
  if (config.stream) {
    run_stream(config, out);
  } else {
    run_batch(config, out);
  }

  std::filesystem::create_directories(config.out);
  write_decisions_csv(out.decisions, config.out / "decisions.csv");
  write_run_echo(config, config.out / "run.txt");
  write_timing_csv(out.frame_ms, config.out / "timing.csv");
  if (config.mode == Mode::kMusic) write_selection_csv(out.decisions, config.out / "selection.csv");
  if (!out.sic_results.empty()) write_theta_table(out.sic_results, config.out / "theta_table.csv");

  if (config.gt) {
    const auto gt = load_ground_truth(*config.gt, config.allowance);
    const auto matches = scored(out.decisions);
    auto report = evaluate(matches, gt);
    report.timing = summarize_timing(out.frame_ms);
    write_report_files(report, config.out);
    out.report = std::move(report);
  }
  return out;
}

void write_decisions_csv(const std::vector<MatchDecision>& decisions,
                         const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "query_index,technique_id,match_index,theta,confidence\n";
  for (const auto& d : decisions) {
    out << d.query << ',' << d.technique_id << ',' << d.match_index << ','
        << format_double(d.theta) << ',' << format_double(d.confidence) << '\n';
  }
}

std::vector<MatchDecision> read_decisions_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<MatchDecision> decisions;
  std::map<std::string, std::size_t> technique_order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with("query_index")) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 5) {
      throw FormatError("decisions line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected 5");
    }
    MatchDecision d;
    try {
      d.query = std::stol(fields[0]);
      d.match_index = std::stol(fields[2]);
    } catch (const std::logic_error&) {
      throw ParseError("decisions line " + std::to_string(line_no) + ": bad index");
    }
    d.technique_id = fields[1];
    d.technique = technique_order.emplace(d.technique_id, technique_order.size()).first->second;
    d.theta = parse_double(fields[3]);
    d.confidence = parse_double(fields[4]);
    decisions.push_back(std::move(d));
  }
  return decisions;
}

void write_selection_csv(const std::vector<MatchDecision>& decisions,
                         const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "query_index,technique_id\n";
  for (const auto& d : decisions) out << d.query << ',' << d.technique_id << '\n';
}

void write_theta_table(const std::vector<ConsistencyResult>& results,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  std::string line;
  for (const auto& r : results) {
    line.clear();
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
      if (i) line += ',';
      line += std::to_string(r.candidates[i].index);
      line += ':';
      line += format_double(r.candidates[i].theta);
    }
    line += '\n';
    out << line;
  }
}

EvalReport run_eval(const EvalConfig& config) {
  if (!std::filesystem::exists(config.decisions)) {
    throw IoError("no such decisions file " + config.decisions.string());
  }
  if (!std::filesystem::exists(config.gt)) throw IoError("no such ground truth " + config.gt.string());
  const auto decisions = read_decisions_csv(config.decisions);
  const auto gt = load_ground_truth(config.gt, config.allowance);
  const auto matches = scored(decisions);
  auto report = evaluate(matches, gt);

  const auto dir = config.decisions.parent_path();
  if (const auto ms = read_timing_csv(dir / "timing.csv")) report.timing = summarize_timing(*ms);

  std::filesystem::create_directories(config.out);
  write_report_files(report, config.out);

  bool music = false;
  if (std::ifstream run(dir / "run.txt"); run) {
    for (std::string line; std::getline(run, line);) music = music || line == "mode=music";
  }
  std::set<std::string> ids;
  for (const auto& d : decisions) ids.insert(d.technique_id);
  if (music || ids.size() > 1) write_selection_csv(decisions, config.out / "selection.csv");
  return report;
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  config.sic.validate();
  config.seq.validate();
  if (config.sizes.size() < 2) throw ConfigError("bench needs at least two map sizes");
  if (config.queries < 1 || config.techniques < 1) {
    throw ConfigError("queries and techniques must be positive");
  }
  const Index history = std::max(config.sic.f, config.seq.ds - 1);
  const Index q_count = history + config.queries;

  std::vector<BenchRow> rows;
  for (const Index n : config.sizes) {
    if (n < 2) throw ConfigError("map sizes must be at least 2");
    SynthConfig sc;
    sc.q_count = q_count;
    sc.n_count = n;
    sc.drift_amp = std::max<Index>(0, q_count - n);
    sc.dropout = 0.3;
    sc.seed = config.seed;
    std::vector<TechniqueProfile> profiles;
    std::vector<std::string> ids;
    for (Index t = 0; t < config.techniques; ++t) {
      ids.push_back("t" + std::to_string(t));
      profiles.push_back({ids.back(), 1.0, 0.5, 0.3, 0, -1});
    }
    const auto data = generate_set(sc, profiles);
    std::vector<std::vector<ScoreVector>> frames(static_cast<std::size_t>(q_count));
    for (Index q = 0; q < q_count; ++q) {
      for (const auto& t : data.techniques) frames[static_cast<std::size_t>(q)].push_back(t.matrix.values().row(q));
    }

    // Each matcher runs its own online pass; the first `history` frames only
    // fill the buffers and are not timed.
    std::vector<double> cand_ms, theta_ms, sic_ms, seq_ms, music_ms;
    volatile double sink = 0.0;
    SicStream sic(n, config.sic);
    for (Index q = 0; q < q_count; ++q) {
      const auto& row = frames[static_cast<std::size_t>(q)][0];
      auto start = Clock::now();
      sic.ingest(row);
      const double c_ms = ms_since(start);
      start = Clock::now();
      const auto r = sic.score();
      const double t_ms = ms_since(start);
      sink = sink + r.theta;
      if (q < history) continue;
      cand_ms.push_back(c_ms);
      theta_ms.push_back(t_ms);
      sic_ms.push_back(c_ms + t_ms);
    }
    SeqStream seq(n, config.seq);
    for (Index q = 0; q < q_count; ++q) {
      const auto start = Clock::now();
      const auto r = seq.push(frames[static_cast<std::size_t>(q)][0]);
      const double ms = ms_since(start);
      sink = sink + r.theta;
      if (q >= history) seq_ms.push_back(ms);
    }
    MusicStream music(ids, n, config.sic);
    for (Index q = 0; q < q_count; ++q) {
      const auto start = Clock::now();
      const auto d = music.push(frames[static_cast<std::size_t>(q)]);
      const double ms = ms_since(start);
      sink = sink + d.theta;
      if (q >= history) music_ms.push_back(ms);
    }
    rows.push_back({"sic", "candidates", n, median(cand_ms)});
    rows.push_back({"sic", "theta", n, median(theta_ms)});
    rows.push_back({"sic", "total", n, median(sic_ms)});
    rows.push_back({"seqslam", "total", n, median(seq_ms)});
    rows.push_back({"music", "total", n, median(music_ms)});
  }

  if (config.out) {
    std::filesystem::create_directories(*config.out);
    auto out = open_out(*config.out / "bench.csv");
    out << "matcher,stage,map_size,ms_per_frame\n";
    std::map<std::string, ChartSeries> series;
    for (const auto& r : rows) {
      out << r.matcher << ',' << r.stage << ',' << r.map_size << ',' << format_double(r.ms_per_frame)
          << '\n';
      const auto name = r.matcher + "/" + r.stage;
      series[name].name = name;
      series[name].points.emplace_back(static_cast<double>(r.map_size), r.ms_per_frame);
    }
    std::vector<ChartSeries> chart;
    for (auto& [name, s] : series) chart.push_back(std::move(s));
    write_line_chart_svg({"Per-frame matching time", "map size (references)", "ms per frame", true},
                         chart, *config.out / "bench.svg");
  }
  return rows;
}

SynthData run_synth(const SynthCommand& command) {
  if (command.format != "simm" && command.format != "csv") {
    throw ConfigError("format must be simm or csv");
  }
  auto data = generate(command.config);
  std::filesystem::create_directories(command.out);
  save_matrix(data.matrix, command.out / ("matrix." + command.format));
  save_ground_truth(data.truth, command.out / "gt.csv");
  write_config_echo(command.config, command.out / "config.txt");
  return data;
}

SimilarityMatrix run_describe(const DescribeConfig& config) {
  config.params.validate();
  const auto load_all = [](const std::filesystem::path& dir) {
    std::vector<GrayImage> images;
    for (const auto& p : list_images(dir)) images.push_back(read_pgm(p));
    if (images.empty()) throw IoError("no images in " + dir.string());
    return images;
  };
  auto matrix = similarity_matrix(load_all(config.queries), load_all(config.references), config.params);
  if (config.out.has_parent_path()) std::filesystem::create_directories(config.out.parent_path());
  save_matrix(matrix, config.out);
  return matrix;
}

}  // namespace sicvpr
