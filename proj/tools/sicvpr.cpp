// sicvpr command line: match, eval, bench, synth, describe.
//
// Exit codes: 0 success, 2 input/config error, 3 evaluation-domain error.

#include "sicvpr/app.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_sic_flags(CLI::App* cmd, sicvpr::SicParams& p) {
  cmd->add_option("--k", p.k, "top candidates per query")->capture_default_str();
  cmd->add_option("--f", p.f, "past queries in the consistency sum")->capture_default_str();
  cmd->add_option("--w", p.w, "half-window in reference frames")->capture_default_str();
}

void add_seq_flags(CLI::App* cmd, sicvpr::SeqParams& p) {
  cmd->add_option("--ds", p.ds, "trajectory length")->capture_default_str();
  cmd->add_option("--vmin", p.v_min, "minimum velocity")->capture_default_str();
  cmd->add_option("--vmax", p.v_max, "maximum velocity")->capture_default_str();
  cmd->add_option("--vstep", p.v_step, "velocity step")->capture_default_str();
  cmd->add_option("--rwindow", p.r_window, "contrast enhancement half-window")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential-consistency place recognition matcher"};
  app.require_subcommand(1);

  sicvpr::RunConfig run;
  std::vector<std::string> technique_specs;
  std::string mode = "music";
  std::string confidence = "theta";
  std::string gt_path;
  bool no_scale = false;
  std::uint64_t match_seed = 0;
  auto* match = app.add_subcommand("match", "match queries against references");
  match->add_option("--technique", technique_specs, "id=path[:distance]")->required();
  match->add_option("--mode", mode, "sic | music | seqslam | argmax")
      ->check(CLI::IsMember({"sic", "music", "seqslam", "argmax"}))
      ->capture_default_str();
  add_sic_flags(match, run.sic);
  add_seq_flags(match, run.seq);
  match->add_option("--allowance", run.allowance, "ground-truth frame tolerance")
      ->capture_default_str();
  match->add_option("--gt", gt_path, "ground-truth CSV; also writes an evaluation");
  match->add_option("--out", run.out, "output directory")->capture_default_str();
  match->add_flag("--stream", run.stream, "process rows one at a time");
  match->add_flag("--no-scale", no_scale, "skip per-row z-scoring");
  match->add_option("--confidence", confidence, "theta | score")
      ->check(CLI::IsMember({"theta", "score"}))
      ->capture_default_str();
  match->add_option("--seed", match_seed, "unused; matching is deterministic");

  sicvpr::EvalConfig eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a decisions file");
  eval_cmd->add_option("--decisions", eval.decisions, "decisions.csv from match")->required();
  eval_cmd->add_option("--gt", eval.gt, "ground-truth CSV")->required();
  eval_cmd->add_option("--allowance", eval.allowance, "frame tolerance")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "output directory")->capture_default_str();

  sicvpr::BenchConfig bench;
  std::string bench_out = ".";
  auto* bench_cmd = app.add_subcommand("bench", "per-frame timing against map size");
  bench_cmd->add_option("--sizes", bench.sizes, "map sizes")->delimiter(',')->capture_default_str();
  add_sic_flags(bench_cmd, bench.sic);
  add_seq_flags(bench_cmd, bench.seq);
  bench_cmd->add_option("--queries", bench.queries, "timed queries per size")->capture_default_str();
  bench_cmd->add_option("--techniques", bench.techniques, "techniques for MuSIC")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "generator seed")->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "output directory")->capture_default_str();

  sicvpr::SynthCommand synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic matrix and ground truth");
  synth_cmd->add_option("--q", synth.config.q_count, "query count")->capture_default_str();
  synth_cmd->add_option("--n", synth.config.n_count, "reference count")->capture_default_str();
  synth_cmd->add_option("--signal", synth.config.signal, "diagonal boost")->capture_default_str();
  synth_cmd->add_option("--noise", synth.config.noise_sigma, "noise sigma")->capture_default_str();
  synth_cmd->add_option("--dropout", synth.config.dropout, "boost omission probability")
      ->capture_default_str();
  synth_cmd->add_option("--drift", synth.config.drift_amp, "max diagonal offset")
      ->capture_default_str();
  synth_cmd->add_option("--allowance", synth.config.allowance, "echoed into config.txt")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.config.seed, "generator seed")->capture_default_str();
  synth_cmd->add_option("--format", synth.format, "simm | csv")
      ->check(CLI::IsMember({"simm", "csv"}))
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output directory")->capture_default_str();

  sicvpr::DescribeConfig describe;
  auto* describe_cmd = app.add_subcommand("describe", "similarity matrix from two PGM folders");
  describe_cmd->add_option("--queries", describe.queries, "query image folder")->required();
  describe_cmd->add_option("--refs", describe.references, "reference image folder")->required();
  describe_cmd->add_option("--grid-w", describe.params.grid_w, "thumbnail width")
      ->capture_default_str();
  describe_cmd->add_option("--grid-h", describe.params.grid_h, "thumbnail height")
      ->capture_default_str();
  describe_cmd->add_option("--patch", describe.params.patch, "normalization block size")
      ->capture_default_str();
  describe_cmd->add_option("--out", describe.out, "matrix file (.simm or .csv)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*match) {
      for (const auto& spec : technique_specs) run.techniques.push_back(sicvpr::parse_technique_spec(spec));
      run.mode = sicvpr::parse_mode(mode);
      run.scale = !no_scale;
      run.confidence = confidence == "score" ? sicvpr::ConfidenceSource::kScore
                                             : sicvpr::ConfidenceSource::kTheta;
      if (!gt_path.empty()) run.gt = gt_path;
      const auto out = sicvpr::run_match(run);
      std::cout << "wrote " << out.decisions.size() << " decisions to "
                << (run.out / "decisions.csv").string() << '\n';
      if (out.report) {
        std::cout << "auc=" << out.report->auc << " ep=" << out.report->ep
                  << " accuracy=" << out.report->top1_accuracy << '\n';
      }
    } else if (*eval_cmd) {
      const auto report = sicvpr::run_eval(eval);
      std::cout << "auc=" << report.auc << " ep=" << report.ep << " p_r0=" << report.p_r0
                << " r_p100=" << report.r_p100 << " accuracy=" << report.top1_accuracy << '\n';
    } else if (*bench_cmd) {
      bench.out = bench_out;
      for (const auto& r : sicvpr::run_bench(bench)) {
        std::cout << r.matcher << ',' << r.stage << ',' << r.map_size << ',' << r.ms_per_frame
                  << '\n';
      }
    } else if (*synth_cmd) {
      const auto data = sicvpr::run_synth(synth);
      std::cout << "wrote " << data.matrix.rows() << "x" << data.matrix.cols() << " matrix to "
                << synth.out.string() << '\n';
    } else if (*describe_cmd) {
      const auto m = sicvpr::run_describe(describe);
      std::cout << "wrote " << m.rows() << "x" << m.cols() << " matrix to " << describe.out.string()
                << '\n';
    }
  } catch (const sicvpr::EvalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
