// Command-line front end: fit models on CSV data, predict from saved fits,
// run simulation benchmarks, and render saved artifacts as tables.
//
// Exit codes: 0 success, 2 argument/parse errors, 3 model-fitting errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wocr/wocr.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitFit = 3;

const std::vector<std::string> kModelNames = {
    "rr-d",     "rr-gamma",    "pcr-d-c",    "pcr-gamma-c",
    "pcr-d-ac", "pcr-gamma-ac", "ridge-grid", "pcr-cv"};

std::string joined_model_names() {
  std::string out;
  for (const auto& name : kModelNames) out += (out.empty() ? "" : ", ") + name;
  return out;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("WOCR_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct FitArgs {
  std::string data_path;
  std::string response;
  std::string model = "rr-d";
  std::string criterion;  // empty keeps the variant default
  double a = 50.0;
  std::uint64_t seed = 0;
  long budget = 2000;
  std::string out_path;
};

wocr::ModelSpec build_spec(const std::string& model, const std::string& criterion,
                           double a, std::uint64_t seed, long budget) {
  wocr::ModelSpec spec;
  const auto variant = wocr::variant_from_string(model);
  if (!variant)
    throw CLI::ValidationError("--model", "unknown model '" + model +
                                              "'; valid names: " + joined_model_names());
  spec.variant = *variant;
  if (!criterion.empty()) {
    const auto crit = wocr::criterion_from_string(criterion);
    if (!crit)
      throw CLI::ValidationError("--criterion",
                                 "unknown criterion '" + criterion +
                                     "'; valid names: gcv, aic, bic");
    spec.criterion = *crit;
  }
  spec.fixed_a = a;
  spec.seed = seed;
  spec.budget_2d = budget;
  return spec;
}

int cmd_fit(const FitArgs& args) {
  wocr::Dataset data;
  try {
    data = wocr::split_response(wocr::read_csv_file(args.data_path), args.response);
  } catch (const std::exception& e) {
    std::cerr << "error reading " << args.data_path << ": " << e.what() << '\n';
    return kExitParse;
  }
  try {
    const wocr::ModelSpec spec =
        build_spec(args.model, args.criterion, args.a, args.seed, args.budget);
    const wocr::FitResult fit = wocr::fit(spec, data.x, data.y);
    std::cout << wocr::summary_text(fit);
    if (!args.out_path.empty()) {
      const auto artifact = wocr::make_artifact(fit, data.predictors);
      write_text_file(args.out_path, wocr::to_json(artifact).dump(2) + "\n");
    }
    return kExitOk;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  } catch (const wocr::ConstantColumn& e) {
    const auto idx = static_cast<std::size_t>(e.column());
    std::cerr << "fit failed: predictor '"
              << (idx < data.predictors.size() ? data.predictors[idx]
                                               : std::to_string(e.column()))
              << "' is constant\n";
    return kExitFit;
  } catch (const std::exception& e) {
    std::cerr << "fit failed: " << e.what() << '\n';
    return kExitFit;
  }
}

struct PredictArgs {
  std::string model_path;
  std::string data_path;
  std::string out_path;
};

int cmd_predict(const PredictArgs& args) {
  wocr::FitArtifact artifact;
  wocr::Csv csv;
  try {
    std::ifstream in(args.model_path);
    if (!in) throw std::runtime_error("cannot open " + args.model_path);
    artifact = wocr::artifact_from_json(nlohmann::json::parse(in));
    csv = wocr::read_csv_file(args.data_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  try {
    // pick the model's predictor columns out of the CSV by name
    Eigen::MatrixXd x(csv.values.rows(),
                      static_cast<Eigen::Index>(artifact.column_names.size()));
    for (std::size_t k = 0; k < artifact.column_names.size(); ++k) {
      Eigen::Index found = -1;
      for (std::size_t j = 0; j < csv.columns.size(); ++j)
        if (csv.columns[j] == artifact.column_names[k]) {
          found = static_cast<Eigen::Index>(j);
          break;
        }
      if (found < 0)
        throw std::runtime_error("column '" + artifact.column_names[k] +
                                 "' missing from " + args.data_path);
      x.col(static_cast<Eigen::Index>(k)) = csv.values.col(found);
    }
    const Eigen::VectorXd pred = wocr::predict(artifact, x);
    std::ostringstream out;
    wocr::write_csv(out, {"prediction"}, pred);
    if (args.out_path.empty()) std::cout << out.str();
    else write_text_file(args.out_path, out.str());
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "prediction failed: " << e.what() << '\n';
    return kExitFit;
  }
}

struct BenchArgs {
  std::string gen = "B";
  Eigen::Index n = 500;
  Eigen::Index p = 5;
  double rho = 0.5;
  double sigma2 = 1.0;
  int runs = 200;
  Eigen::Index test_size = 500;
  std::uint64_t seed = 0;
  std::vector<double> b;
  std::vector<std::string> models;  // empty selects all eight
  std::string data_path;            // split protocol when set
  std::string response;
  double ratio = 0.667;
  int threads = 0;
  std::string out_path;
  std::string table_path;
};

int cmd_bench(const BenchArgs& args) {
  std::vector<wocr::ModelSpec> methods;
  try {
    const auto& names = args.models.empty() ? kModelNames : args.models;
    for (const auto& name : names)
      methods.push_back(build_spec(name, "", 50.0, args.seed, 2000));
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  }

  wocr::BenchReport report;
  try {
    if (!args.data_path.empty()) {
      const wocr::Dataset data =
          wocr::split_response(wocr::read_csv_file(args.data_path), args.response);
      report = wocr::split_protocol(data.x, data.y, args.ratio, args.runs, methods,
                                    args.seed, resolve_threads(args.threads));
    } else {
      wocr::SimConfig config;
      if (args.gen == "A") config.generator = wocr::Generator::ModelA;
      else if (args.gen == "B") config.generator = wocr::Generator::ModelB;
      else if (args.gen == "C") config.generator = wocr::Generator::ModelC;
      else {
        std::cerr << "--gen must be A, B, or C\n";
        return kExitParse;
      }
      config.n = args.n;
      config.p = args.p;
      config.rho = args.rho;
      config.sigma2 = args.sigma2;
      config.runs = args.runs;
      config.test_size = args.test_size;
      config.seed = args.seed;
      if (!args.b.empty()) {
        config.b.resize(static_cast<Eigen::Index>(args.b.size()));
        for (std::size_t i = 0; i < args.b.size(); ++i)
          config.b(static_cast<Eigen::Index>(i)) = args.b[i];
      }
      report = wocr::run_benchmark(config, methods, resolve_threads(args.threads));
    }
  } catch (const wocr::CsvParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "benchmark failed: " << e.what() << '\n';
    return kExitFit;
  }

  const std::string table = wocr::to_table(report);
  std::cout << table;
  try {
    if (!args.out_path.empty())
      write_text_file(args.out_path, wocr::to_json(report).dump(2) + "\n");
    if (!args.table_path.empty()) write_text_file(args.table_path, table);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitOk;
}

struct ReportArgs {
  std::string in_path;
};

int cmd_report(const ReportArgs& args) {
  try {
    std::ifstream in(args.in_path);
    if (!in) throw std::runtime_error("cannot open " + args.in_path);
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.contains("variant")) {
      const wocr::FitArtifact art = wocr::artifact_from_json(j);
      std::cout << "variant: " << art.variant << "  criterion: " << art.criterion
                << '\n'
                << wocr::component_table(art);
    } else if (j.contains("methods")) {
      // re-render the stored summary rows
      std::cout << "protocol: " << j.value("protocol", std::string("?")) << '\n';
      for (const auto& row : j.at("methods"))
        std::cout << row.at("method").get<std::string>()
                  << "  avg MSE: " << row.at("average_mse").get<double>()
                  << "  SE: " << row.at("se_mse").get<double>()
                  << "  med comps: " << row.at("median_hard_components").get<double>()
                  << "  failed: " << row.at("failed_runs").get<int>() << '\n';
    } else {
      throw std::runtime_error("unrecognized artifact in " + args.in_path);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted orthogonal components regression toolkit"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a model to CSV data");
  fit_cmd->add_option("--data", fit_args.data_path, "input CSV with header row")
      ->required();
  fit_cmd->add_option("--response", fit_args.response, "response column name")
      ->required();
  fit_cmd->add_option("--model", fit_args.model,
                      "model name (" + joined_model_names() + ")");
  fit_cmd->add_option("--criterion", fit_args.criterion, "gcv, aic, or bic");
  fit_cmd->add_option("--a", fit_args.a, "expit scale for the fixed-a selectors");
  fit_cmd->add_option("--seed", fit_args.seed, "search seed (default 0)");
  fit_cmd->add_option("--budget", fit_args.budget, "2-D search evaluation budget");
  fit_cmd->add_option("--out", fit_args.out_path, "write fit JSON here");

  PredictArgs predict_args;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "predict from a saved fit JSON");
  predict_cmd->add_option("--model", predict_args.model_path, "fit JSON path")
      ->required();
  predict_cmd->add_option("--data", predict_args.data_path, "input CSV")->required();
  predict_cmd->add_option("--out", predict_args.out_path,
                          "output CSV (default: standard output)");

  BenchArgs bench_args;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run a simulation or split benchmark");
  bench_cmd->add_option("--gen", bench_args.gen, "generator: A, B, or C");
  bench_cmd->add_option("--n", bench_args.n, "training rows");
  bench_cmd->add_option("--p", bench_args.p, "predictors");
  bench_cmd->add_option("--rho", bench_args.rho, "AR(1) correlation (generator A)");
  bench_cmd->add_option("--sigma2", bench_args.sigma2, "noise variance");
  bench_cmd->add_option("--runs", bench_args.runs, "number of runs");
  bench_cmd->add_option("--test-size", bench_args.test_size, "test rows per run");
  bench_cmd->add_option("--seed", bench_args.seed, "master seed (default 0)");
  bench_cmd->add_option("--b", bench_args.b,
                        "component coefficients for generator A");
  bench_cmd->add_option("--models", bench_args.models,
                        "model names to run (default: all)");
  bench_cmd->add_option("--data", bench_args.data_path,
                        "CSV for the split protocol instead of a generator");
  bench_cmd->add_option("--response", bench_args.response,
                        "response column (split protocol)");
  bench_cmd->add_option("--ratio", bench_args.ratio, "train fraction for splits");
  bench_cmd->add_option("--threads", bench_args.threads,
                        "parallel runs (default WOCR_THREADS or 1)");
  bench_cmd->add_option("--out", bench_args.out_path, "write report JSON here");
  bench_cmd->add_option("--table", bench_args.table_path, "write text table here");

  ReportArgs report_args;
  CLI::App* report_cmd =
      app.add_subcommand("report", "render a saved JSON artifact as a table");
  report_cmd->add_option("--in", report_args.in_path, "fit or bench JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (fit_cmd->parsed()) return cmd_fit(fit_args);
  if (predict_cmd->parsed()) return cmd_predict(predict_args);
  if (bench_cmd->parsed()) return cmd_bench(bench_args);
  return cmd_report(report_args);
}
