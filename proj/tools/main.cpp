// Command-line front end: analytic table reproduction (with self-check),
// Monte Carlo campaigns, an encrypt/decrypt demo, and lattice dumps.
// All numbers come from the library; this layer only formats.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kyberlc/simulate.hpp"

using namespace kyberlc;
using nlohmann::json;

namespace {

struct Row {
  std::string config;
  std::string metric;
  double value;
  double tolerance; // 0 means exact
};

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void emit(const std::vector<Row>& rows, const std::string& format,
          const std::string& out_path) {
  std::ostringstream os;
  if (format == "csv") {
    os << "config,metric,value,tolerance\n";
    for (const auto& r : rows)
      os << r.config << ',' << r.metric << ',' << format_value(r.value) << ','
         << format_value(r.tolerance) << '\n';
  } else {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"config", r.config},
                     {"metric", r.metric},
                     {"value", r.value},
                     {"tolerance", r.tolerance}});
    os << arr.dump(2) << '\n';
  }
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << os.str();
  }
}

Seed resolve_seed(const std::string& cli_seed) {
  if (!cli_seed.empty()) return seed_from_hex(cli_seed);
  if (const char* env = std::getenv("KYBERLC_SEED")) return seed_from_hex(env);
  Seed s{};
  s[0] = 1;
  return s;
}

double percent(const Rational& r) {
  return std::round(r.to_double() * 10000.0) / 100.0;
}

const std::vector<int> kAllParams = {512, 768, 1024};

// reference expectations for --check mode
struct Expect {
  std::string config;
  std::string metric;
  double value;
  double tolerance;
};

int check_rows(const std::vector<Row>& rows, const std::vector<Expect>& expects) {
  int bad = 0;
  for (const auto& e : expects) {
    bool found = false;
    for (const auto& r : rows)
      if (r.config == e.config && r.metric == e.metric) {
        found = true;
        if (std::abs(r.value - e.value) > e.tolerance + 1e-12) {
          std::cerr << "check failed: " << e.config << ' ' << e.metric << " = "
                    << r.value << ", expected " << e.value << " +- "
                    << e.tolerance << '\n';
          ++bad;
        }
      }
    if (!found) {
      std::cerr << "check failed: missing row " << e.config << ' ' << e.metric << '\n';
      ++bad;
    }
  }
  return bad;
}

std::vector<Row> analyze_table1() {
  std::vector<Row> rows;
  for (int bits : kAllParams) {
    const ParamSet& p = param_set(bits);
    rows.push_back({p.name, "cer", cer_metrics(p, "int").cer.to_double(), 0});
    rows.push_back({p.name, "ciphertext_bits", double(p.ciphertext_bits()), 0});
    rows.push_back({p.name, "plaintext_bits", double(p.plaintext_bits()), 0});
    rows.push_back({p.name, "log2_dfr_bound", dfr_original_bound(p), 1});
  }
  return rows;
}

std::vector<Row> analyze_table2() {
  std::vector<Row> rows;
  for (int bits : kAllParams) {
    const ParamSet& p = param_set(bits);
    NoiseModel m = noise_model(p, VarPsiSource::enumerated);
    rows.push_back({p.name, "var_psi_du", m.var_psi_du, 0});
    rows.push_back({p.name, "uniform_variance", uniform_variance(p.d_v).to_double(), 0});
    rows.push_back({p.name, "normalized_variance_clt", m.normalized_var, 1e-4});
  }
  return rows;
}

std::vector<Row> analyze_table3() {
  std::vector<Row> rows;
  struct Entry {
    const char* name;
    const LatticeCode* code;
    BlockSchedule sched;
  };
  const Entry entries[] = {{"int", &integer_code(), integer_schedule()},
                           {"bw16", &bw16_code(), bw16_schedule()},
                           {"leech", &leech24_code(), leech_schedule()}};
  for (const auto& e : entries) {
    const LatticeCode& c = *e.code;
    ShortestVector sv = shortest_vector(c.basis);
    double radius = payload_scale(c.p) * std::sqrt(double(sv.norm2)) /
                    (2.0 * payload_scale(2));
    std::string cfg = e.name;
    rows.push_back({cfg, "p", double(c.p), 0});
    rows.push_back({cfg, "normalized_radius", radius, 5e-4});
    rows.push_back({cfg, "bits_per_block", double(c.bits_per_block), 0});
    rows.push_back({cfg, "n_bits", double(e.sched.bits()), 0});
    rows.push_back({cfg, "cer_r_percent",
                    percent(cer_metrics(kyber768(), e.name).cer_r), 0});
    for (int bits : kAllParams) {
      const ParamSet& p = param_set(bits);
      rows.push_back({cfg + "/" + p.name, "log2_dfr",
                      dfr_lattice(p, e.sched, VarPsiSource::enumerated), 3});
    }
  }
  return rows;
}

std::vector<Row> analyze_table4(int du_hat_filter) {
  std::vector<Row> rows;
  for (int du_hat : {9, 8}) {
    if (du_hat_filter != 0 && du_hat != du_hat_filter) continue;
    rows.push_back({"du_hat=" + std::to_string(du_hat), "var_psi_reference",
                    reference_var_psi(du_hat).to_double(), 0});
    rows.push_back({"du_hat=" + std::to_string(du_hat), "var_psi_enumerated",
                    var_psi(du_hat).to_double(), 0});
    for (int bits : kAllParams) {
      const ParamSet& p = param_set(bits);
      std::string cfg = p.name + "/du_hat=" + std::to_string(du_hat);
      rows.push_back({cfg, "log2_dfr_bicm",
                      dfr_bicm(p, BchCode::kT, du_hat, VarPsiSource::reference), 5});
      rows.push_back({cfg, "cer_r_percent",
                      percent(cer_metrics(p.with_du_hat(du_hat), "bicm").cer_r), 0});
    }
  }
  return rows;
}

std::vector<Expect> expects_for_table(int table) {
  switch (table) {
    case 1:
      return {{"KYBER512", "cer", 24, 0},
              {"KYBER768", "cer", 34, 0},
              {"KYBER1024", "cer", 49, 0},
              {"KYBER512", "log2_dfr_bound", -142, 1},
              {"KYBER768", "log2_dfr_bound", -167, 1},
              {"KYBER1024", "log2_dfr_bound", -176, 1}};
    case 2:
      return {{"KYBER512", "normalized_variance_clt", 0.0023, 1e-4},
              {"KYBER768", "normalized_variance_clt", 0.0021, 1e-4},
              {"KYBER1024", "normalized_variance_clt", 0.0012, 1e-4}};
    case 3:
      return {{"bw16", "normalized_radius", 0.7067, 5e-4},
              {"leech", "normalized_radius", 0.7067, 5e-4},
              {"bw16", "bits_per_block", 20, 0},
              {"leech", "bits_per_block", 36, 0},
              {"bw16", "n_bits", 320, 0},
              {"leech", "n_bits", 380, 0},
              {"bw16", "cer_r_percent", 20, 0.05},
              {"leech", "cer_r_percent", 32.6, 0.05},
              {"bw16/KYBER512", "log2_dfr", -149, 3},
              {"bw16/KYBER768", "log2_dfr", -177, 3},
              {"bw16/KYBER1024", "log2_dfr", -259, 3},
              {"leech/KYBER512", "log2_dfr", -111, 3},
              {"leech/KYBER768", "log2_dfr", -131, 3},
              {"leech/KYBER1024", "log2_dfr", -226, 3}};
    case 4:
      return {{"KYBER512/du_hat=9", "log2_dfr_bicm", -623, 5},
              {"KYBER768/du_hat=9", "log2_dfr_bicm", -683, 5},
              {"KYBER1024/du_hat=9", "log2_dfr_bicm", -791, 5},
              {"KYBER512/du_hat=8", "log2_dfr_bicm", -194, 5},
              {"KYBER768/du_hat=8", "log2_dfr_bicm", -202, 5},
              {"KYBER1024/du_hat=8", "log2_dfr_bicm", -213, 5},
              {"KYBER512/du_hat=9", "cer_r_percent", 8.33, 0.05},
              {"KYBER768/du_hat=9", "cer_r_percent", 8.82, 0.05},
              {"KYBER1024/du_hat=9", "cer_r_percent", 16.33, 0.05},
              {"KYBER512/du_hat=8", "cer_r_percent", 16.67, 0.05},
              {"KYBER768/du_hat=8", "cer_r_percent", 17.65, 0.05},
              {"KYBER1024/du_hat=8", "cer_r_percent", 24.49, 0.05}};
  }
  return {};
}

BitVec hex_to_bits(const std::string& hex) {
  if (hex.size() != 64) throw std::invalid_argument("message must be 64 hex characters");
  Seed bytes = seed_from_hex(hex);
  BitVec bits(256);
  for (int i = 0; i < 256; ++i) bits[i] = bytes[i / 8] >> (i % 8) & 1;
  return bits;
}

std::string bits_to_hex(const BitVec& bits) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (int byte = 0; byte < 32; ++byte) {
    int v = 0;
    for (int b = 0; b < 8; ++b) v |= bits[byte * 8 + b] << b;
    out.push_back(digits[v >> 4]);
    out.push_back(digits[v & 0xf]);
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice-coded Kyber.CPA analysis and simulation toolkit"};
  app.require_subcommand(1);

  int params_bits = 768;
  std::string encoder = "int";
  int du_hat = 0;
  int trials = 40;
  std::string seed_hex, format = "csv", out_path, message_hex;
  int table = 0;
  bool check = false;
  int stress_dv = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--params", params_bits, "parameter set: 512, 768 or 1024")
        ->check(CLI::IsMember({512, 768, 1024}));
    cmd->add_option("--seed", seed_hex, "32-byte master seed as 64 hex chars");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out_path, "write the report to this path");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "reproduce the analytic tables");
  analyze->add_option("--table", table, "table to reproduce: 1, 2, 3 or 4")
      ->required()
      ->check(CLI::IsMember({1, 2, 3, 4}));
  analyze->add_option("--du-hat", du_hat, "restrict table 4 to one depth")
      ->check(CLI::IsMember({9, 8}));
  analyze->add_flag("--check", check, "verify rows against the reference values");
  add_common(analyze);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo campaigns");
  simulate->add_option("--encoder", encoder, "payload encoder")
      ->check(CLI::IsMember({"int", "bw16", "leech", "bicm"}));
  simulate->add_option("--du-hat", du_hat, "u-compression depth for BICM")
      ->check(CLI::IsMember({10, 9, 8}));
  simulate->add_option("--trials", trials, "number of keygen/encrypt trials");
  simulate->add_option("--stress", stress_dv,
                       "harness-only d_v override so raw errors appear")
      ->check(CLI::IsMember({2, 3}));
  add_common(simulate);

  CLI::App* demo = app.add_subcommand("demo", "encrypt and decrypt one message");
  demo->add_option("--encoder", encoder, "payload encoder")
      ->check(CLI::IsMember({"int", "bw16", "leech", "bicm"}));
  demo->add_option("--du-hat", du_hat, "u-compression depth for BICM")
      ->check(CLI::IsMember({10, 9, 8}));
  demo->add_option("--message", message_hex, "256-bit message as 64 hex chars");
  add_common(demo);

  CLI::App* dump = app.add_subcommand("dump-lattice", "emit code bases as CSV");
  dump->add_option("--encoder", encoder, "which lattice: bw16 or leech")
      ->check(CLI::IsMember({"bw16", "leech"}));
  add_common(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const Seed seed = resolve_seed(seed_hex);

    if (*analyze) {
      std::vector<Row> rows;
      switch (table) {
        case 1: rows = analyze_table1(); break;
        case 2: rows = analyze_table2(); break;
        case 3: rows = analyze_table3(); break;
        case 4: rows = analyze_table4(du_hat); break;
      }
      emit(rows, format, out_path);
      if (check) {
        auto expects = expects_for_table(table);
        if (du_hat != 0 && table == 4) {
          std::erase_if(expects, [&](const Expect& e) {
            return e.config.find("du_hat=" + std::to_string(du_hat)) ==
                   std::string::npos;
          });
        }
        if (check_rows(rows, expects) != 0) return 3;
      }
      return 0;
    }

    if (*simulate) {
      const ParamSet& base = param_set(params_bits);
      EncoderKind kind = encoder_from_name(encoder);
      int hat = du_hat == 0 || kind != EncoderKind::bicm ? base.d_u : du_hat;
      EncoderConfig cfg = make_encoder_config(kind, base, hat, seed);

      EncoderConfig sample_cfg = cfg;
      if (stress_dv) {
        sample_cfg.params.d_v = stress_dv;
        if (sample_cfg.bicm) sample_cfg.bicm->params.d_v = stress_dv;
      }
      NoiseSampleSet noise = sample_noise(sample_cfg, trials, seed);
      DiagnosticsReport d = diagnostics(noise);
      CampaignResult camp = stress_dv
                                ? stress_campaign(cfg, stress_dv, trials, seed)
                                : roundtrip_campaign(cfg, trials, seed);

      std::string cname = base.name + "/" + encoder;
      std::vector<Row> rows = {
          {cname, "trials", double(trials), 0},
          {cname, "samples", double(d.count), 0},
          {cname, "normalized_variance", d.normalized_variance, 0},
          {cname, "skewness", d.skewness, 0},
          {cname, "excess_kurtosis", d.excess_kurtosis, 0},
          {cname, "failures", double(camp.failures), 0},
          {cname, "raw_block_errors", double(camp.raw_block_errors), 0},
          {cname, "raw_bit_errors", double(camp.raw_bit_errors), 0},
          {cname, "corrected_total", double(camp.corrected_total), 0},
      };
      for (auto [p, z] : d.quantiles)
        rows.push_back({cname, "abs_quantile_" + format_value(p), z, 0});
      emit(rows, format, out_path);
      return camp.failures == 0 ? 0 : 2;
    }

    if (*demo) {
      const ParamSet& base = param_set(params_bits);
      EncoderKind kind = encoder_from_name(encoder);
      int hat = du_hat == 0 || kind != EncoderKind::bicm ? base.d_u : du_hat;
      EncoderConfig cfg = make_encoder_config(kind, base, hat, seed);

      BitVec msg = message_hex.empty()
                       ? hex_to_bits("00112233445566778899aabbccddeeff"
                                     "00112233445566778899aabbccddeeff")
                       : hex_to_bits(message_hex);
      BitVec payload(cfg.payload_bits(), 0);
      std::copy(msg.begin(), msg.end(), payload.begin());

      KeyPair kp = keygen(cfg.params, derive_seed(seed, 0x01));
      EncryptResult enc =
          pipeline_encrypt(kp.pk, payload, cfg, derive_seed(seed, 0x02));
      DecryptResult dec = pipeline_decrypt(enc.ct, kp.sk, cfg);
      BitVec back(dec.bits.begin(), dec.bits.begin() + 256);

      bool ok = !dec.failed && back == msg;
      std::cout << "params          " << cfg.params.name << '\n'
                << "encoder         " << encoder << '\n'
                << "payload bits    " << cfg.payload_bits() << '\n'
                << "ciphertext bits " << enc.ct.bit_size() << '\n'
                << "message         " << bits_to_hex(msg) << '\n'
                << "decrypted       " << bits_to_hex(back) << '\n'
                << "match           " << (ok ? "yes" : "NO") << '\n';
      return ok ? 0 : 2;
    }

    if (*dump) {
      const LatticeCode& c = encoder == "leech" ? leech24_code() : bw16_code();
      std::ostringstream os;
      os << "matrix,row,values\n";
      auto put = [&](const char* name, const IntMat& m) {
        for (std::size_t i = 0; i < m.size(); ++i) {
          os << name << ',' << i << ',';
          for (std::size_t j = 0; j < m[i].size(); ++j)
            os << m[i][j] << (j + 1 < m[i].size() ? ' ' : '\n');
        }
      };
      put("basis", c.basis);
      put("b_hat", c.b_hat);
      os << "pi,0,";
      for (std::size_t i = 0; i < c.pi.size(); ++i)
        os << c.pi[i] << (i + 1 < c.pi.size() ? ' ' : '\n');
      if (out_path.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        f << os.str();
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
