#include "segkit/cli.hpp"

#include "segkit/dataset_gen.hpp"
#include "segkit/dense_crf.hpp"
#include "segkit/png_io.hpp"
#include "segkit/seg_eval.hpp"
#include "segkit/train_plan.hpp"
#include "segkit/weak_labeler.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace segkit::cli {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ClassTaxonomy taxonomy_from_file(const std::string& path) {
  if (path.empty()) return ClassTaxonomy::pascal_voc();
  std::vector<std::string> names;
  std::istringstream stream(read_text_file(path));
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  return ClassTaxonomy(std::move(names));
}

struct RenderOptions {
  std::string config_path;
  std::string out_dir;
  std::string manifest_path;
  int samples_per_class = -1;
  bool print_config = false;
};

struct ConvertOptions {
  std::string images_dir;
  std::string boxes_path;
  std::string out_dir;
  std::string method = "crf";
  ConvertParams params;
};

struct EvaluateOptions {
  std::string pred_dir;
  std::string gt_dir;
  std::string classes_path;
  std::string report_path;
};

struct PlanOptions {
  std::string stage;
  std::vector<std::string> manifests;
  std::string out_path;
};

int run_render(const RenderOptions& opt, std::uint64_t seed, int threads, bool verbose) {
  const ClassTaxonomy& taxonomy = ClassTaxonomy::pascal_voc();
  ForgeConfig config = opt.config_path.empty()
                           ? parse_forge_config("", taxonomy)
                           : parse_forge_config(read_text_file(opt.config_path), taxonomy);
  if (opt.samples_per_class >= 0) config.samples_per_class = opt.samples_per_class;
  if (const char* env = std::getenv("SEGKIT_MESH_DIR")) config.mesh_dir = env;
  if (const char* env = std::getenv("SEGKIT_BACKGROUND_DIR")) config.background_dir = env;
  populate_pools_from_dirs(config, taxonomy);

  if (opt.print_config) {
    std::cout << serialize_forge_config(config, taxonomy);
    return 0;
  }

  const AssetStore assets = AssetStore::load_from_config(config);
  std::vector<ManifestEntry> entries;
  if (!opt.manifest_path.empty()) {
    entries = parse_manifest(read_text_file(opt.manifest_path), taxonomy);
    render_entries(config, assets, entries, opt.out_dir, threads);
    std::filesystem::create_directories(opt.out_dir);
    write_text_file(std::filesystem::path(opt.out_dir) / "manifest.txt",
                    serialize_manifest(entries, taxonomy));
  } else {
    entries = generate_dataset(config, assets, taxonomy, seed, opt.out_dir, threads);
  }
  if (verbose) {
    std::cerr << "rendered " << entries.size() << " image/label pairs into " << opt.out_dir
              << "\n";
  }
  return 0;
}

int run_convert(const ConvertOptions& opt, std::uint64_t seed, int threads, bool verbose) {
  const ClassTaxonomy& taxonomy = ClassTaxonomy::pascal_voc();
  ConvertParams params = opt.params;
  params.method = parse_convert_method(opt.method);
  const auto annotations = parse_box_file(read_text_file(opt.boxes_path), taxonomy);
  const auto entries =
      convert_dataset(opt.images_dir, annotations, params, opt.out_dir, seed, threads);
  std::filesystem::create_directories(opt.out_dir);
  write_text_file(std::filesystem::path(opt.out_dir) / "manifest.txt",
                  serialize_convert_manifest(entries));
  if (verbose) {
    std::cerr << "converted " << entries.size() << " images into " << opt.out_dir << "\n";
  }
  return 0;
}

int run_evaluate(const EvaluateOptions& opt, int threads) {
  const ClassTaxonomy taxonomy = taxonomy_from_file(opt.classes_path);
  const IoUReport report = evaluate_dataset(opt.pred_dir, opt.gt_dir, taxonomy, threads);
  const std::string table = format_report_table(report, taxonomy);
  const std::string kv = format_report_kv(report, taxonomy);
  std::cout << table << '\n' << kv;
  if (!opt.report_path.empty()) write_text_file(opt.report_path, table + "\n" + kv);
  return 0;
}

int run_plan(const PlanOptions& opt) {
  for (const std::string& manifest : opt.manifests) {
    if (!std::filesystem::exists(manifest)) throw Error("manifest not found: " + manifest);
  }
  const FineTunePlan plan = make_plan(parse_stage(opt.stage), opt.manifests);
  const std::string text = serialize_plan(plan);
  std::cout << text;
  if (!opt.out_path.empty()) write_text_file(opt.out_path, text);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"segkit: synthetic scene rendering, box-to-mask conversion, and "
               "mean-IoU evaluation for VOC-style semantic segmentation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int threads = 1;
  bool verbose = false;
  app.add_option("--seed", seed, "Seed every stochastic operation derives from")
      ->capture_default_str();
  app.add_option("--threads", threads, "Worker threads; output bytes never depend on this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--verbose", verbose, "Progress notes on standard error");

  RenderOptions render_opt;
  CLI::App* render = app.add_subcommand("render", "Generate a randomized synthetic dataset");
  render->add_option("--config", render_opt.config_path, "Forge configuration file (key = value lines)");
  render->add_option("--out", render_opt.out_dir, "Output dataset directory");
  render->add_option("--manifest", render_opt.manifest_path,
                     "Regenerate exactly the ids and seeds of an existing manifest");
  render->add_option("--samples-per-class", render_opt.samples_per_class,
                     "Override the config's samples_per_class");
  render->add_flag("--print-config", render_opt.print_config,
                   "Print the effective configuration and exit");

  ConvertOptions convert_opt;
  CLI::App* convert = app.add_subcommand("convert", "Convert box annotations to label images");
  convert->add_option("--images", convert_opt.images_dir, "Directory of <image_id>.png inputs")
      ->required();
  convert->add_option("--boxes", convert_opt.boxes_path,
                      "Box file: `image_id class_name xmin ymin xmax ymax` per line")
      ->required();
  convert->add_option("--out", convert_opt.out_dir, "Output label directory")->required();
  convert->add_option("--method", convert_opt.method, "grabcut or crf")
      ->check(CLI::IsMember({"grabcut", "crf"}))
      ->capture_default_str();
  convert->add_option("--gmm-components", convert_opt.params.grabcut.gmm_components,
                      "GrabCut color model components")
      ->capture_default_str();
  convert->add_option("--gamma", convert_opt.params.grabcut.gamma, "GrabCut pairwise strength")
      ->capture_default_str();
  convert->add_option("--grabcut-iterations", convert_opt.params.grabcut.iterations,
                      "GrabCut refit/min-cut rounds")
      ->capture_default_str();
  convert->add_option("--spatial-weight", convert_opt.params.crf.spatial_weight,
                      "CRF spatial kernel weight")
      ->capture_default_str();
  convert->add_option("--spatial-sigma", convert_opt.params.crf.spatial_sigma,
                      "CRF spatial kernel sigma (pixels)")
      ->capture_default_str();
  convert->add_option("--bilateral-weight", convert_opt.params.crf.bilateral_weight,
                      "CRF bilateral kernel weight")
      ->capture_default_str();
  convert->add_option("--bilateral-spatial-sigma", convert_opt.params.crf.bilateral_spatial_sigma,
                      "CRF bilateral spatial sigma (pixels)")
      ->capture_default_str();
  convert->add_option("--bilateral-color-sigma", convert_opt.params.crf.bilateral_color_sigma,
                      "CRF bilateral color sigma (8-bit units)")
      ->capture_default_str();
  convert->add_option("--crf-iterations", convert_opt.params.crf.mean_field_iterations,
                      "Mean-field iterations")
      ->capture_default_str();
  convert->add_option("--inside-fg-prob", convert_opt.params.inside_fg_prob,
                      "Foreground probability inside a box")
      ->capture_default_str();
  convert->add_option("--outside-bg-prob", convert_opt.params.outside_bg_prob,
                      "Background probability outside all boxes")
      ->capture_default_str();

  EvaluateOptions eval_opt;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate->add_option("--pred", eval_opt.pred_dir, "Directory of predicted label files")
      ->required();
  evaluate->add_option("--gt", eval_opt.gt_dir, "Directory of ground-truth label files")
      ->required();
  evaluate->add_option("--classes", eval_opt.classes_path,
                       "Class name list (one per line, 21 names, background first)");
  evaluate->add_option("--report", eval_opt.report_path, "Also write the report to this file");

  PlanOptions plan_opt;
  CLI::App* plan = app.add_subcommand("plan", "Emit a fine-tuning plan");
  plan->add_option("--stage", plan_opt.stage, "baseline or synthetic")->required();
  plan->add_option("--manifest", plan_opt.manifests, "Dataset manifest path (repeatable)");
  plan->add_option("--out", plan_opt.out_path, "Also write the plan to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit cleanly; anything else is usage
  }

  try {
    if (render->parsed()) {
      if (!render_opt.print_config && render_opt.out_dir.empty()) {
        std::cerr << "render: --out is required\n";
        return 1;
      }
      return run_render(render_opt, seed, threads, verbose);
    }
    if (convert->parsed()) return run_convert(convert_opt, seed, threads, verbose);
    if (evaluate->parsed()) return run_evaluate(eval_opt, threads);
    if (plan->parsed()) return run_plan(plan_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace segkit::cli
