#include "panolayout/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include "panolayout/gradcheck.hpp"
#include "panolayout/http_service.hpp"
#include "panolayout/imageops.hpp"
#include "panolayout/layout.hpp"
#include "panolayout/layout_io.hpp"
#include "panolayout/losses.hpp"
#include "panolayout/parallel.hpp"
#include "panolayout/png_io.hpp"

namespace panolayout::cli {

namespace {

using nlohmann::json;

constexpr double kDegree = kPi / 180.0;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> score_array(const json& entry, const char* key) {
  if (!entry.contains(key) || !entry[key].is_array())
    throw std::invalid_argument(std::string("loss case needs array \"") + key + "\"");
  return entry[key].get<std::vector<double>>();
}

std::vector<Raster> image_array(const json& entry, const char* key) {
  if (!entry.contains(key) || !entry[key].is_array())
    throw std::invalid_argument(std::string("loss case needs image array \"") + key + "\"");
  std::vector<Raster> out;
  for (const json& img : entry[key]) {
    out.emplace_back(img.at("width").get<std::size_t>(), img.at("height").get<std::size_t>(),
                     img.at("channels").get<std::size_t>(),
                     img.at("data").get<std::vector<double>>());
  }
  return out;
}

Raster render_mode(const SceneLayout& layout, const std::string& mode) {
  if (mode == "composite") return composite(layout);
  if (mode == "weight") return composite_weight(layout);
  const auto colon = mode.find(':');
  if (colon != std::string::npos) {
    const std::string kind = mode.substr(0, colon);
    const std::size_t index = std::stoul(mode.substr(colon + 1));
    if (index < 1 || index > layout.n())
      throw std::out_of_range("object index " + std::to_string(index) + " out of range");
    if (kind == "opacity") return opacity_field(layout, index - 1);
    if (kind == "distance")
      return distance_field(layout.object(index - 1).ellipse, layout.width(), layout.height());
  }
  throw std::invalid_argument("unknown render mode '" + mode + "'");
}

}  // namespace

double evaluate_loss_case(const json& entry) {
  const std::string loss = entry.at("loss").get<std::string>();
  if (loss == "G") return loss_G(score_array(entry, "fake"));
  if (loss == "D") return loss_D(score_array(entry, "fake"), score_array(entry, "real"));
  if (loss == "recon") return loss_recon(image_array(entry, "a"), image_array(entry, "b"));
  if (loss == "cycle") return loss_cycle(image_array(entry, "x"), image_array(entry, "emptied"));
  if (loss == "emp")
    return loss_emp(score_array(entry, "real"), score_array(entry, "fake"),
                    image_array(entry, "x"), image_array(entry, "emptied"));
  if (loss == "total") {
    LossWeights w;
    w.lambda_gan = entry.value("lambda_gan", w.lambda_gan);
    w.lambda_cycle = entry.value("lambda_cycle", w.lambda_cycle);
    return loss_total(entry.at("g").get<double>(), entry.at("d").get<double>(),
                      entry.at("cycle").get<double>(), w);
  }
  throw std::invalid_argument("unknown loss '" + loss + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"panolayout: 360-degree object layout rendering and checks"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0 = all cores)");

  // render
  auto* render = app.add_subcommand("render", "Render a layout to a PLT1 grid");
  std::string layout_path, out_path, weights_path, mode = "composite";
  render->add_option("--layout", layout_path, "Layout JSON")->required();
  render->add_option("--out", out_path, "Output PLT1 file")->required();
  render->add_option("--weights", weights_path, "Also write the composite weight as PNG");
  render->add_option("--mode", mode, "composite | weight | distance:i | opacity:i");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "Compare analytic gradients to central differences");
  GradcheckOptions gc;
  std::string report_path;
  gradcheck->add_option("--samples", gc.samples, "Number of parameter checks");
  gradcheck->add_option("--seed", gc.seed, "PRNG seed");
  gradcheck->add_option("--width", gc.width, "Grid width");
  gradcheck->add_option("--height", gc.height, "Grid height");
  gradcheck->add_option("--report", report_path, "Write the JSON report here");

  // augment
  auto* aug = app.add_subcommand("augment", "Random circular shift / flip of image and layout");
  std::string image_path, out_prefix;
  std::uint64_t seed = 0;
  aug->add_option("--image", image_path, "Panorama PNG")->required();
  aug->add_option("--layout", layout_path, "Layout JSON")->required();
  aug->add_option("--seed", seed, "PRNG seed")->required();
  aug->add_option("--out-prefix", out_prefix, "Writes P.png, P.layout.json, P.record.json")->required();

  // project
  auto* project = app.add_subcommand("project", "Render a perspective view of a panorama");
  double yaw = 0.0, pitch = 0.0, roll = 0.0, fov = 90.0;
  std::size_t view_w = 512, view_h = 512;
  project->add_option("--image", image_path, "Panorama PNG")->required();
  project->add_option("--yaw", yaw, "Degrees");
  project->add_option("--pitch", pitch, "Degrees");
  project->add_option("--roll", roll, "Degrees");
  project->add_option("--fov", fov, "Horizontal field of view, degrees");
  project->add_option("--out-width", view_w, "Output width");
  project->add_option("--out-height", view_h, "Output height");
  project->add_option("--out", out_path, "Output PNG")->required();

  // manipulate
  auto* manip = app.add_subcommand("manipulate", "Edit objects of a layout");
  std::vector<std::string> ops;
  manip->add_option("--layout", layout_path, "Layout JSON")->required();
  manip->add_option("--op", ops,
                    "remove:i | translate:i:da:db | resize:i:ds | rotate:i:dg | ecc:i:e (repeatable)")
      ->required();
  manip->add_option("--out", out_path, "Output layout JSON")->required();

  // losses
  auto* losses = app.add_subcommand("losses", "Evaluate loss fixtures");
  std::string fixture_path;
  losses->add_option("--fixture", fixture_path, "Fixture JSON")->required();

  // random
  auto* rand = app.add_subcommand("random", "Write a seeded random layout");
  std::size_t n = 20, d_f = 1024, width = 512, height = 256;
  rand->add_option("--seed", seed, "PRNG seed")->required();
  rand->add_option("--n", n, "Object count");
  rand->add_option("--d-f", d_f, "Feature dimension");
  rand->add_option("--width", width, "Render width");
  rand->add_option("--height", height, "Render height");
  rand->add_option("--out", out_path, "Output layout JSON")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Start the rendering service");
  int port = 8080;
  std::string root, host = "127.0.0.1";
  serve->add_option("--port", port, "TCP port")->required();
  serve->add_option("--root", root, "Directory of static editor files");
  serve->add_option("--host", host, "Bind address");

  std::vector<std::string> argv_storage{"panolayout"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  set_max_threads(threads);
  try {
    if (*render) {
      const SceneLayout layout = load_layout(layout_path);
      write_plt1(out_path, render_mode(layout, mode));
      if (!weights_path.empty()) save_png(weights_path, composite_weight(layout));
      out << "wrote " << out_path << "\n";
      return 0;
    }
    if (*gradcheck) {
      const GradcheckReport report = run_gradcheck(gc);
      if (!report_path.empty()) write_text_file(report_path, report.to_json().dump(2) + "\n");
      out << "gradcheck: " << report.checks - report.failures << "/" << report.checks
          << " within tolerance (" << format_real(100.0 * report.pass_fraction) << "%), "
          << report.singular_exclusions << " singular exclusions -> "
          << (report.passed ? "PASS" : "FAIL") << "\n";
      return report.passed ? 0 : 1;
    }
    if (*aug) {
      const EquirectImage image = load_equirect_png(image_path);
      const SceneLayout layout = load_layout(layout_path);
      const AugmentResult result = augment(image, layout, seed);
      save_png(out_prefix + ".png", result.image.pixels());
      save_layout(out_prefix + ".layout.json", result.layout);
      write_text_file(out_prefix + ".record.json", result.record.to_json().dump() + "\n");
      out << "t=" << result.record.t << " flip=" << (result.record.flip ? "true" : "false") << "\n";
      return 0;
    }
    if (*project) {
      const EquirectImage image = load_equirect_png(image_path);
      PerspectiveCamera cam;
      cam.yaw = yaw * kDegree;
      cam.pitch = pitch * kDegree;
      cam.roll = roll * kDegree;
      cam.hfov = fov * kDegree;
      cam.out_width = view_w;
      cam.out_height = view_h;
      save_png(out_path, project_perspective(image.pixels(), cam));
      out << "wrote " << out_path << "\n";
      return 0;
    }
    if (*manip) {
      SceneLayout layout = load_layout(layout_path);
      for (const auto& op : ops) layout = manipulate(layout, parse_manipulation(op));
      save_layout(out_path, layout);
      out << "wrote " << out_path << "\n";
      return 0;
    }
    if (*losses) {
      const json doc = json::parse(read_text_file(fixture_path));
      bool ok = true;
      for (const json& entry : doc.at("cases")) {
        const double value = evaluate_loss_case(entry);
        out << entry.value("name", std::string("case")) << " " << entry.at("loss").get<std::string>()
            << " " << format_real(value);
        if (entry.contains("expected")) {
          const double expected = entry.at("expected").get<double>();
          const double tol = entry.value("tolerance", 1e-12);
          const bool pass = std::abs(value - expected) <= tol;
          ok = ok && pass;
          out << " " << (pass ? "PASS" : "FAIL") << " expected " << format_real(expected);
        }
        out << "\n";
      }
      return ok ? 0 : 1;
    }
    if (*rand) {
      save_layout(out_path, random_layout(seed, n, d_f, width, height));
      out << "wrote " << out_path << "\n";
      return 0;
    }
    if (*serve) {
      service::HttpService http(root);
      out << "serving on http://" << host << ":" << port << "\n" << std::flush;
      if (!http.listen(host, port)) {
        err << "error: cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace panolayout::cli
