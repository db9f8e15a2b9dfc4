#include "pideg/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pideg/analysis.hpp"
#include "pideg/engine.hpp"
#include "pideg/errors.hpp"
#include "pideg/gate.hpp"
#include "pideg/io.hpp"
#include "pideg/lc.hpp"
#include "pideg/presets.hpp"

namespace pideg {

namespace {

std::vector<double> parse_number_list(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    double v = 0.0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [next, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || next == begin) {
      throw ParseError(std::string(what) + ": expected a number", pos);
    }
    out.push_back(v);
    pos = static_cast<std::size_t>(next - text.data());
    if (pos == text.size()) break;
    if (text[pos] != ',') throw ParseError(std::string(what) + ": expected \",\"", pos);
    ++pos;
  }
  if (out.size() != count) {
    throw ParseError(std::string(what) + ": expected " + std::to_string(count) + " values", 0);
  }
  return out;
}

struct EngineFlags {
  double kp = 0.0, ki = 0.0, kd = 0.0;
  double kr = 100.0, kf = 100.0;
  std::string lc = "invexp";
  std::string adsr = "0.01,0.1,0.7,0.2";
  std::string gate;
  double fs = 1000.0;
  std::string windup = "off";
  std::optional<std::size_t> d_off;
  std::optional<std::size_t> i_off;
  std::string takeover;
  std::optional<double> ceiling;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
  cmd->add_option("--kp", f.kp, "proportional gain")->check(CLI::NonNegativeNumber);
  cmd->add_option("--ki", f.ki, "integral gain, 1/s")->check(CLI::NonNegativeNumber);
  cmd->add_option("--kd", f.kd, "derivative gain, s")->check(CLI::NonNegativeNumber);
  cmd->add_option("--kr", f.kr, "leader rise rate, 1/s")->check(CLI::PositiveNumber);
  cmd->add_option("--kf", f.kf, "leader fall rate, 1/s")->check(CLI::PositiveNumber);
  cmd->add_option("--lc", f.lc, "leader curve: invexp, trap, adsr, or file:<csv>");
  cmd->add_option("--adsr", f.adsr, "attack,decay,sustain,release (s,s,level,s)");
  cmd->add_option("--gate", f.gate, "gate spec, e.g. on:1,off:0.5")->required();
  cmd->add_option("--fs", f.fs, "envelope sample rate, Hz")->check(CLI::PositiveNumber);
  cmd->add_option("--windup", f.windup, "clamp the follower inside the recursion")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--d-off", f.d_off, "disable D this many samples into key-off");
  cmd->add_option("--i-off", f.i_off, "disable I this many samples into key-off");
  cmd->add_option("--takeover", f.takeover, "tail takeover: min_samples,threshold,length");
  cmd->add_option("--ceiling", f.ceiling, "clamp all gains to this value")
      ->check(CLI::PositiveNumber);
}

LcSource lc_from_flags(const EngineFlags& f) {
  if (f.lc == "invexp") return InverseExpLc{f.kr, f.kf};
  if (f.lc == "trap") return TrapezoidLc{f.kr, f.kf};
  if (f.lc == "adsr") {
    std::vector<double> v = parse_number_list(f.adsr, 4, "--adsr");
    return AdsrLc{v[0], v[1], v[2], v[3]};
  }
  if (f.lc.rfind("file:", 0) == 0) {
    std::string path = f.lc.substr(5);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open leader file " + path);
    return load_lc_csv(in);
  }
  throw ConfigError("unknown leader curve \"" + f.lc + "\"");
}

PidegParams params_from_flags(const EngineFlags& f) {
  PidegParams p;
  p.kp = f.kp;
  p.ki = f.ki;
  p.kd = f.kd;
  p.windup = f.windup == "on";
  p.gain_ceiling = f.ceiling;
  p.i_disable_after_keyoff = f.i_off;
  p.d_disable_after_keyoff = f.d_off;
  if (!f.takeover.empty()) {
    std::vector<double> v = parse_number_list(f.takeover, 3, "--takeover");
    if (v[0] < 0.0 || v[0] != std::floor(v[0])) throw ConfigError("takeover min must be a whole sample count");
    if (v[2] < 1.0 || v[2] != std::floor(v[2])) throw ConfigError("takeover length must be a whole sample count");
    p.takeover = TakeoverConfig{static_cast<std::size_t>(v[0]), v[1], static_cast<std::size_t>(v[2])};
  }
  return p;
}

EnvelopeTrace run_from_flags(const EngineFlags& f) {
  GateSignal gate = GateSignal::parse(f.gate, f.fs);
  return run_envelope(gate, lc_from_flags(f), params_from_flags(f), f.fs);
}

// Verdict on the trailing key-off run: true = decays and stays quiet,
// false = keeps ringing, empty = no tail long enough to judge.
std::optional<bool> tail_verdict(const EnvelopeTrace& t) {
  if (t.size() == 0 || t.gate.back() != 0) return std::nullopt;
  std::size_t start = t.size();
  while (start > 0 && t.gate[start - 1] == 0) --start;
  if (t.size() - start < 100) return std::nullopt;
  return is_finite_envelope(t.eo, start, 1e-3);
}

const char* tail_label(const std::optional<bool>& v) {
  if (!v) return "n/a";
  return *v ? "settles" : "never-settling";
}

nlohmann::json report_json(const EnvelopeTrace& t, std::size_t begin, std::size_t end) {
  std::span<const double> fc(t.fc.data() + begin, end - begin);
  std::span<const double> lc(t.lc.data() + begin, end - begin);
  std::span<const double> eo(t.eo.data() + begin, end - begin);
  OscillationReport osc = oscillation_report(fc, lc, t.fs);
  nlohmann::json j;
  j["samples"] = end - begin;
  j["fs_hz"] = t.fs;
  j["alternation_ratio"] = osc.alternation_ratio;
  j["mean_frequency_hz"] = osc.mean_frequency_hz;
  j["mean_abs_deviation"] = osc.mean_abs_deviation;
  j["max_bump"] = max_bump(eo);
  std::optional<double> settle = settling_time(eo, 1.0, 0.01, t.fs);
  j["settled"] = settle.has_value();
  if (settle) j["settling_time_s"] = *settle;
  std::optional<bool> tail = tail_verdict(t);
  if (tail) j["finite_envelope"] = *tail;
  return j;
}

int cmd_render(const EngineFlags& f, const std::string& out_path, std::ostream& out) {
  EnvelopeTrace trace = run_from_flags(f);
  write_file_atomic(out_path, [&](std::ostream& os) { write_trace_csv(trace, os); });
  out << "render: " << trace.size() << " samples at " << trace.fs << " Hz -> " << out_path
      << " | tail: " << tail_label(tail_verdict(trace)) << "\n";
  return 0;
}

int cmd_audio(const EngineFlags& f, const RenderConfig& cfg, const std::string& wav_path,
              std::ostream& out) {
  validate_render_config(cfg);
  EnvelopeTrace trace = run_from_flags(f);
  write_file_atomic(wav_path, [&](std::ostream& os) { write_wav(trace, cfg, os); });
  out << "audio: " << trace.size() << " samples -> " << wav_path << " (" << cfg.tone_hz
      << " Hz tone at " << cfg.audio_fs << " Hz) | tail: " << tail_label(tail_verdict(trace))
      << "\n";
  return 0;
}

int cmd_sweep(int figure, const std::string& outdir, std::ostream& out) {
  std::vector<ExperimentPreset> presets = figure_presets(figure);
  std::filesystem::create_directories(outdir);
  for (const ExperimentPreset& p : presets) {
    GateSignal gate = GateSignal::parse(p.gate_spec, p.fs);
    EnvelopeTrace trace = run_envelope(gate, p.lc, p.params, p.fs);
    std::filesystem::path path = std::filesystem::path(outdir) / (p.name + ".csv");
    write_file_atomic(path, [&](std::ostream& os) { write_trace_csv(trace, os); });
    nlohmann::json j = report_json(trace, 0, trace.size());
    j["name"] = p.name;
    j["file"] = path.string();
    out << j.dump() << "\n";
  }
  return 0;
}

int cmd_analyze(const std::string& in_path, const std::string& window, bool compact,
                std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) throw ParseError("cannot open trace " + in_path, 0);
  EnvelopeTrace trace = read_trace_csv(in);
  std::size_t begin = 0;
  std::size_t end = trace.size();
  if (!window.empty()) {
    std::vector<double> v = parse_number_list(window, 2, "--window");
    if (v[0] < 0.0 || v[1] <= v[0]) throw ConfigError("--window needs 0 <= start < end");
    begin = static_cast<std::size_t>(v[0] * trace.fs);
    end = std::min(end, static_cast<std::size_t>(v[1] * trace.fs));
    if (begin + 3 > end) throw ConfigError("--window selects fewer than 3 samples");
  }
  nlohmann::json j = report_json(trace, begin, end);
  out << (compact ? j.dump() : j.dump(2)) << "\n";
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PID-driven envelope generator"};
  app.require_subcommand(1);

  EngineFlags render_flags;
  std::string render_out;
  CLI::App* render = app.add_subcommand("render", "run the engine and write a trace CSV");
  add_engine_flags(render, render_flags);
  render->add_option("--out", render_out, "output CSV path")->required();

  int figure = 0;
  std::string outdir = ".";
  CLI::App* sweep = app.add_subcommand("sweep", "write the built-in preset family for one figure");
  sweep->add_option("--figure", figure, "figure id, 11 through 17")->required();
  sweep->add_option("--outdir", outdir, "output directory");

  EngineFlags audio_flags;
  RenderConfig audio_cfg;
  std::string wav_out;
  CLI::App* audio = app.add_subcommand("audio", "render the envelope as an amplitude-modulated tone");
  add_engine_flags(audio, audio_flags);
  audio->add_option("--tone", audio_cfg.tone_hz, "tone frequency, Hz")->check(CLI::PositiveNumber);
  audio->add_option("--audio-fs", audio_cfg.audio_fs, "audio sample rate, Hz")
      ->check(CLI::PositiveNumber);
  audio->add_option("--amplitude", audio_cfg.amplitude, "peak amplitude in (0, 1]");
  audio->add_option("--wav", wav_out, "output WAV path")->required();

  std::string analyze_in;
  std::string window;
  bool compact = false;
  CLI::App* analyze = app.add_subcommand("analyze", "report metrics for a trace CSV");
  analyze->add_option("--in", analyze_in, "trace CSV path")->required();
  analyze->add_option("--window", window, "analysis window start,end in seconds");
  analyze->add_flag("--json", compact, "compact single-line JSON");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
    if (render->parsed()) return cmd_render(render_flags, render_out, out);
    if (sweep->parsed()) return cmd_sweep(figure, outdir, out);
    if (audio->parsed()) return cmd_audio(audio_flags, audio_cfg, wav_out, out);
    if (analyze->parsed()) return cmd_analyze(analyze_in, window, compact, out);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << " (sample " << e.sample << ")\n";
    return 1;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace pideg
