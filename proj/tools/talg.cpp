#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "talgebra/collage/algebra.hpp"
#include "talgebra/collage/export.hpp"
#include "talgebra/collage/fit.hpp"
#include "talgebra/collage/raster.hpp"
#include "talgebra/dfa/generate.hpp"
#include "talgebra/dfa/inference.hpp"
#include "talgebra/dfa/instance.hpp"
#include "talgebra/dfa/sufficiency.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/io/corpus_file.hpp"
#include "talgebra/io/dfa_file.hpp"
#include "talgebra/io/model_file.hpp"
#include "talgebra/io/term_text.hpp"
#include "talgebra/io/text.hpp"
#include "talgebra/scene/generate.hpp"
#include "talgebra/scene/ground.hpp"
#include "talgebra/scene/train.hpp"

using namespace talgebra;

namespace {

// Results go to stdout unless an output path was given.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    io::write_file_atomic(out_path, text);
}

// Parameter files are whitespace-separated reals; # starts a comment line.
std::vector<double> read_params_file(const std::string& path) {
  std::vector<double> out;
  std::vector<std::string> lines = io::detail::split_lines(io::read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::vector<std::string> tok = io::detail::split_ws(lines[i]);
    if (tok.empty() || tok[0][0] == '#') continue;
    for (const std::string& t : tok)
      out.push_back(io::detail::parse_real(t, i + 1));
  }
  if (out.empty())
    fail(ErrorCode::syntax_error, path + " holds no parameters");
  return out;
}

std::string params_text(const std::vector<double>& params) {
  std::string out;
  for (double p : params) out += io::real_text(p) + "\n";
  return out;
}

io::ParsedCorpus read_corpus_of(const std::string& path, io::CorpusKind kind,
                                const char* wanted) {
  io::ParsedCorpus c = io::read_corpus(path);
  if (c.kind != kind)
    fail(ErrorCode::domain_error,
         path + " is not a " + std::string(wanted) + " corpus");
  return c;
}

std::vector<scene::PredicateModel> gaussian_models(std::size_t count,
                                                   std::size_t dimension,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return double(rng() >> 11) * 0x1.0p-53; };
  auto gaussian = [&] {
    double u1 = unit(), u2 = unit();
    return 0.3 * std::sqrt(-2.0 * std::log(1.0 - u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  };
  std::vector<scene::PredicateModel> ms(count);
  for (scene::PredicateModel& m : ms) {
    for (std::size_t i = 0; i < dimension; ++i)
      m.weights.push_back(gaussian());
    m.bias = 0.0;
  }
  return ms;
}

geom::Picture render_term_file(const std::string& term_path) {
  TemplateAlgebra alg = collage::collage_ground_truth();
  Term t = io::parse_term(io::read_file(term_path), alg.alphabet(),
                          VariableContext{});
  TypeName type = io::typecheck_term(t, alg.alphabet(), VariableContext{});
  if (!(type == collage::kPictureType))
    fail(ErrorCode::type_mismatch,
         "term has type " + type.name + ", expected picture");
  return alg.eval_closed(t).as_picture();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"template-algebra toolkit: automaton inference, scene "
               "grounding, and collage fitting over shared corpora"};
  app.require_subcommand(1);
  int gate_rc = 0;

  // infer-dfa
  auto* infer = app.add_subcommand(
      "infer-dfa", "infer the canonical automaton from a regular corpus");
  std::string infer_corpus, infer_dot, infer_out, infer_format = "text";
  infer->add_option("corpus", infer_corpus, "regular corpus file")
      ->required();
  infer->add_option("--dot", infer_dot, "also write Graphviz DOT here");
  infer->add_option("--out", infer_out, "write result here instead of stdout");
  infer->add_option("--format", infer_format, "stdout format")
      ->check(CLI::IsMember({"text", "dot"}));
  infer->callback([&] {
    io::ParsedCorpus c =
        read_corpus_of(infer_corpus, io::CorpusKind::regular, "regular");
    dfa::Dfa m = dfa::infer(c.regular);
    if (!infer_dot.empty())
      io::write_file_atomic(infer_dot, io::dot_text(m));
    emit(infer_out,
         infer_format == "dot" ? io::dot_text(m) : io::dfa_text(m));
  });

  // check-sufficient
  auto* check = app.add_subcommand(
      "check-sufficient",
      "report the sufficiency conditions of a regular corpus");
  std::string check_corpus, check_ref;
  check->add_option("corpus", check_corpus, "regular corpus file")
      ->required();
  check->add_option("--reference", check_ref, "reference automaton file")
      ->required();
  check->callback([&] {
    io::ParsedCorpus c =
        read_corpus_of(check_corpus, io::CorpusKind::regular, "regular");
    dfa::SufficiencyReport report =
        dfa::check_sufficient(c.regular, io::read_dfa_file(check_ref));
    emit("", report.to_text());
    if (!report.sufficient()) gate_rc = 3;
  });

  // gen-dfa-corpus
  auto* gen_dfa = app.add_subcommand(
      "gen-dfa-corpus", "generate a sufficient example set for an automaton");
  std::string gen_dfa_target, gen_dfa_out;
  std::uint64_t gen_dfa_seed = 0;
  gen_dfa->add_option("--target", gen_dfa_target, "target automaton file")
      ->required();
  gen_dfa->add_option("--seed", gen_dfa_seed, "generator seed");
  gen_dfa->add_option("--out", gen_dfa_out,
                      "write corpus here instead of stdout");
  gen_dfa->callback([&] {
    dfa::RegularExampleSet set = dfa::generate_sufficient(
        io::read_dfa_file(gen_dfa_target), gen_dfa_seed);
    emit(gen_dfa_out, io::corpus_text(set));
  });

  // eval
  auto* eval = app.add_subcommand(
      "eval", "total value of a corpus under a concrete instance");
  std::string eval_corpus, eval_instance;
  eval->add_option("corpus", eval_corpus, "corpus file")->required();
  eval->add_option("--instance", eval_instance,
                   "automaton file (regular), model file (scene), or "
                   "parameter file (collage)")
      ->required();
  eval->callback([&] {
    io::ParsedCorpus c = io::read_corpus(eval_corpus);
    if (c.kind == io::CorpusKind::regular) {
      TemplateAlgebra alg =
          dfa::admissible_instance(io::read_dfa_file(eval_instance));
      emit("", total_value(alg, c.examples).as_bool() ? "true\n" : "false\n");
    } else if (c.kind == io::CorpusKind::scene) {
      double obj = scene::corpus_objective(
          io::read_models_file(eval_instance), c.scenes);
      emit("", io::real_text(obj) + "\n");
    } else {
      std::vector<double> params = read_params_file(eval_instance);
      TemplateAlgebra alg = collage::collage_template();
      TypedSymbol unknown = collage::sole_uninterpreted(alg);
      TemplateAlgebra full = alg.with_interpretation(
          unknown, alg.family(unknown).instantiate(params));
      emit("", io::real_text(total_value(full, c.examples).as_real()) + "\n");
    }
  });

  // collage-render
  auto* render = app.add_subcommand(
      "collage-render", "render a closed picture term to SVG or PNG");
  std::string render_term, render_out, render_format = "svg";
  int render_resolution = 128;
  render->add_option("term-file", render_term, "file holding one term")
      ->required();
  render->add_option("--out", render_out,
                     "output file (.png selects a raster mask)");
  render->add_option("--resolution", render_resolution,
                     "raster resolution for PNG output");
  render->add_option("--format", render_format, "stdout format")
      ->check(CLI::IsMember({"svg"}));
  render->callback([&] {
    geom::Picture pic = render_term_file(render_term);
    if (render_out.size() >= 4 &&
        render_out.rfind(".png") == render_out.size() - 4) {
      collage::RasterMask mask =
          collage::rasterize(pic, geom::unit_viewport(), render_resolution,
                             render_resolution);
      collage::export_png_mask(mask, render_out);
    } else {
      emit(render_out, collage::svg_text(pic));
    }
  });

  // collage-fit
  auto* fit = app.add_subcommand(
      "collage-fit", "fit open transform parameters to a collage corpus");
  std::string fit_corpus, fit_init, fit_out;
  int fit_steps = 500, fit_resolution = 128;
  double fit_lr = 0.5, fit_tolerance = 1e-3;
  std::uint64_t fit_seed = 0;
  fit->add_option("corpus", fit_corpus, "collage corpus file")->required();
  fit->add_option("--init", fit_init, "initial parameter file")->required();
  fit->add_option("--steps", fit_steps, "iteration cap");
  fit->add_option("--lr", fit_lr, "initial step size");
  fit->add_option("--seed", fit_seed, "seed (descent is deterministic)");
  fit->add_option("--tolerance", fit_tolerance, "stop when loss drops below");
  fit->add_option("--resolution", fit_resolution, "raster resolution");
  fit->add_option("--out", fit_out, "write fitted parameters here");
  fit->callback([&] {
    io::ParsedCorpus c =
        read_corpus_of(fit_corpus, io::CorpusKind::collage, "collage");
    std::vector<double> init = read_params_file(fit_init);
    collage::FitConfig cfg;
    cfg.step = fit_lr;
    cfg.max_iters = fit_steps;
    cfg.tolerance = fit_tolerance;
    cfg.resolution = fit_resolution;
    cfg.seed = unsigned(fit_seed);
    collage::FitResult r = collage::fit_transforms(
        collage::collage_template(), c.examples, init, cfg);
    std::string lines = "loss " + io::real_text(r.trace.back()) + "\nparams";
    for (double p : r.params) lines += " " + io::real_text(p);
    emit("", lines + "\n");
    if (!fit_out.empty()) io::write_file_atomic(fit_out, params_text(r.params));
  });

  // scene-gen
  auto* sgen = app.add_subcommand(
      "scene-gen", "generate a separable labeled scene corpus");
  scene::GenConfig gen_cfg;
  std::string sgen_out;
  sgen->add_option("--scenes", gen_cfg.num_scenes, "number of examples");
  sgen->add_option("--dim", gen_cfg.dimension, "feature dimension");
  sgen->add_option("--noise", gen_cfg.noise_sigma, "feature noise sigma");
  sgen->add_option("--seed", gen_cfg.seed, "generator seed");
  sgen->add_option("--predicates", gen_cfg.num_predicates,
                   "predicate family size");
  sgen->add_option("--min-objects", gen_cfg.min_objects, "objects per scene");
  sgen->add_option("--max-objects", gen_cfg.max_objects, "objects per scene");
  sgen->add_option("--depth", gen_cfg.formula_depth, "formula grammar depth");
  sgen->add_option("--out", sgen_out,
                   "write corpus here (adds a .labels sidecar)");
  sgen->callback([&] {
    scene::SceneCorpus corpus = scene::generate_scene_corpus(gen_cfg);
    std::string text = io::corpus_text(corpus.examples, gen_cfg.num_predicates,
                                       gen_cfg.dimension);
    emit(sgen_out, text);
    if (!sgen_out.empty())
      io::write_scene_labels(sgen_out + ".labels", corpus);
  });

  // scene-train
  auto* strain = app.add_subcommand(
      "scene-train", "train predicate models on a scene corpus");
  std::string strain_corpus, strain_out;
  scene::TrainConfig train_cfg;
  train_cfg.epochs = 100;
  strain->add_option("corpus", strain_corpus, "scene corpus file")
      ->required();
  strain->add_option("--epochs", train_cfg.epochs, "training epochs");
  strain->add_option("--lr", train_cfg.learning_rate, "learning rate");
  strain->add_option("--seed", train_cfg.seed, "model initialization seed");
  strain->add_option("--cap", train_cfg.grounding_cap,
                     "grounding enumeration cap");
  strain->add_option("--period", train_cfg.regrounding_period,
                     "epochs between regroundings");
  strain->add_option("--out", strain_out, "write trained models here");
  strain->callback([&] {
    io::ParsedCorpus c =
        read_corpus_of(strain_corpus, io::CorpusKind::scene, "scene");
    std::vector<scene::PredicateModel> init =
        gaussian_models(c.num_predicates, c.dimension, train_cfg.seed);
    scene::TrainResult r = scene::train(init, c.scenes, train_cfg);
    emit("", "objective " + io::real_text(r.trace.back()) + "\n");
    if (!strain_out.empty()) io::write_models_file(strain_out, r.models);
  });

  // scene-ground
  auto* sground = app.add_subcommand(
      "scene-ground", "best grounding of every example under given models");
  std::string sground_corpus, sground_models;
  std::size_t sground_cap = kDefaultGroundingCap;
  sground->add_option("corpus", sground_corpus, "scene corpus file")
      ->required();
  sground->add_option("--models", sground_models, "predicate model file")
      ->required();
  sground->add_option("--cap", sground_cap, "grounding enumeration cap");
  sground->callback([&] {
    io::ParsedCorpus c =
        read_corpus_of(sground_corpus, io::CorpusKind::scene, "scene");
    std::vector<scene::PredicateModel> ms =
        io::read_models_file(sground_models);
    std::string lines;
    for (const scene::SceneExample& ex : c.scenes) {
      scene::GroundResult g = scene::ground_best(ms, ex, sground_cap);
      lines += io::real_text(g.value);
      for (const auto& [var, id] : g.assignment)
        lines += " " + var + "=" + id;
      lines += "\n";
    }
    emit("", lines);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.kind()) {
      case ErrorKind::parse: return 2;
      case ErrorKind::constraint: return 3;
      case ErrorKind::cap: return 4;
      case ErrorKind::io: return 5;
    }
    return 3;
  }
  return gate_rc;
}
