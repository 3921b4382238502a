#include "anholonomy/cli.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anholonomy/spectral.hpp"
#include "anholonomy/subsetsum.hpp"

namespace anholonomy::cli {

namespace {

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

long long parse_int_token(const std::string& token, int line) {
  const std::string t = trim(token);
  long long value = 0;
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), last, value);
  if (t.empty() || ec != std::errc() || ptr != last)
    throw ParseError(line, "malformed integer '" + t + "'");
  return value;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char raw : s) {
    const unsigned char c = static_cast<unsigned char>(raw);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += raw;
        }
    }
  }
  return out;
}

}  // namespace

void emit_error(std::ostream& err, const std::string& type, const std::string& message) {
  err << "{\"error\":{\"type\":\"" << json_escape(type) << "\",\"message\":\""
      << json_escape(message) << "\"}}\n";
}

RunConfig parse_config(const std::string& text) {
  static const std::array<const char*, 5> known = {"qubits", "p", "steps", "cycles", "format"};
  std::map<std::string, std::pair<int, std::string>> entries;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find_if(known.begin(), known.end(),
                     [&key](const char* k) { return key == k; }) == known.end())
      throw ParseError(lineno, "unknown key '" + key + "'");
    if (entries.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
    entries[key] = {lineno, value};
  }
  if (!entries.count("qubits")) throw ParseError(0, "missing key 'qubits'");
  if (!entries.count("p")) throw ParseError(0, "missing key 'p'");

  RunConfig config;

  const auto& [qubits_line, qubits_value] = entries.at("qubits");
  const long long qubits = parse_int_token(qubits_value, qubits_line);
  if (qubits < 1 || qubits > 60)
    throw ParseError(qubits_line, "qubits must be between 1 and 60");

  const auto& [p_line, p_value] = entries.at("p");
  if (p_value.size() < 2 || p_value.front() != '[' || p_value.back() != ']')
    throw ParseError(p_line, "p must be a bracketed list like [3, 1, 1]");
  const std::string inner = trim(p_value.substr(1, p_value.size() - 2));
  if (inner.empty()) throw ParseError(p_line, "empty p list");
  std::vector<long long> p;
  std::size_t start = 0;
  while (true) {
    const auto comma = inner.find(',', start);
    p.push_back(parse_int_token(
        inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start),
        p_line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (static_cast<long long>(p.size()) != qubits)
    throw ParseError(p_line, "p has " + std::to_string(p.size()) + " entries but qubits = " +
                                 std::to_string(qubits));
  config.params.p = std::move(p);
  try {
    config.params.validate();
  } catch (const Error& e) {
    throw ParseError(p_line, e.what());
  }

  if (entries.count("steps")) {
    const auto& [line, value] = entries.at("steps");
    const long long steps = parse_int_token(value, line);
    if (steps < 2 || steps > 4194304)
      throw ParseError(line, "steps must be between 2 and 4194304");
    config.steps = steps;
  }
  if (entries.count("cycles")) {
    const auto& [line, value] = entries.at("cycles");
    const long long cycles = parse_int_token(value, line);
    if (cycles < 1 || cycles > 1048576)
      throw ParseError(line, "cycles must be between 1 and 1048576");
    config.cycles = cycles;
  }
  if (entries.count("format")) {
    const auto& [line, value] = entries.at("format");
    if (value == "csv")
      config.format = Format::csv;
    else if (value == "json")
      config.format = Format::json;
    else
      throw ParseError(line, "format must be csv or json");
  }
  return config;
}

std::string format_double(double value) {
  if (!std::isfinite(value)) throw Error("non-finite value in output");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string s(buf);
  for (char& c : s) {
    if (c == ',') c = '.';  // guard against a numeric locale set by a host application
  }
  return s;
}

std::string emit_report(const HolonomyReport& report, Format format) {
  std::ostringstream out;
  const int n = report.params.qubits();
  if (format == Format::json) {
    out << "{\"n\":" << n << ",\"p\":[";
    for (std::size_t j = 0; j < report.params.p.size(); ++j)
      out << (j ? "," : "") << report.params.p[j];
    out << "],\"d_N\":" << report.d.str();
    out << ",\"degenerate\":" << (report.degenerate ? "true" : "false");
    out << ",\"cycles\":[";
    for (std::size_t c = 0; c < report.cycles.size(); ++c) {
      out << (c ? "," : "") << "[";
      for (std::size_t k = 0; k < report.cycles[c].size(); ++k)
        out << (k ? "," : "") << report.cycles[c][k];
      out << "]";
    }
    out << "],\"sigma\":[";
    for (std::size_t k = 0; k < report.sigma.size(); ++k)
      out << (k ? "," : "") << "{\"re\":" << format_double(report.sigma[k].real())
          << ",\"im\":" << format_double(report.sigma[k].imag()) << "}";
    out << "],\"gamma\":[";
    for (std::size_t c = 0; c < report.gamma.size(); ++c)
      out << (c ? "," : "") << format_double(report.gamma[c]);
    out << "],\"nu\":" << report.nu.str() << "}\n";
  } else {
    out << "n," << n << "\n";
    out << "p";
    for (const long long pj : report.params.p) out << "," << pj;
    out << "\n";
    out << "d_N," << report.d.str() << "\n";
    out << "degenerate," << (report.degenerate ? "true" : "false") << "\n";
    for (const auto& cyc : report.cycles) {
      out << "cycle";
      for (const int m : cyc) out << "," << m;
      out << "\n";
    }
    for (std::size_t k = 0; k < report.sigma.size(); ++k)
      out << "sigma," << k << "," << format_double(report.sigma[k].real()) << ","
          << format_double(report.sigma[k].imag()) << "\n";
    for (std::size_t c = 0; c < report.gamma.size(); ++c)
      out << "gamma," << c << "," << format_double(report.gamma[c]) << "\n";
    out << "nu," << report.nu.str() << "\n";
  }
  return out.str();
}

HolonomyReport parse_report(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    HolonomyReport report;
    report.params.p = j.at("p").get<std::vector<long long>>();
    if (j.at("n").get<int>() != report.params.qubits())
      throw Error("report field n does not match the length of p");
    report.d = WideInt(j.at("d_N").get<long long>());
    report.degenerate = j.at("degenerate").get<bool>();
    report.cycles = j.at("cycles").get<std::vector<std::vector<int>>>();
    for (const auto& entry : j.at("sigma"))
      report.sigma.emplace_back(entry.at("re").get<double>(), entry.at("im").get<double>());
    report.gamma = j.at("gamma").get<std::vector<double>>();
    report.nu = WideInt(j.at("nu").get<long long>());
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report parse: ") + e.what());
  }
}

namespace {

void run_spectrum(const RunConfig& config, std::ostream& out) {
  const CircuitParams& params = config.params;
  params.validate();
  const int n = params.qubits();
  if (n > 20) throw InstanceTooLargeError("spectrum table is capped at 20 qubits");
  const std::uint64_t dim = 1ULL << n;
  const long long rows = (config.steps + 1) * static_cast<long long>(dim);
  if (rows > (1LL << 24))
    throw InstanceTooLargeError("spectrum table would have " + std::to_string(rows) +
                                " rows; the cap is " + std::to_string(1LL << 24));

  std::vector<QuantumNumbers> labels;
  std::vector<std::string> m_strings;
  labels.reserve(dim);
  m_strings.reserve(dim);
  for (std::uint64_t t = 0; t < dim; ++t) {
    labels.push_back(QuantumNumbers::from_index(n, t));
    m_strings.push_back(principal_number(params, labels.back()).m.str());
  }

  const bool json = config.format == Format::json;
  if (json)
    out << "{\"columns\":[\"lambda\",\"m\",\"theta\"],\"rows\":[";
  else
    out << "lambda,m,theta\n";
  bool first = true;
  for (long long k = 0; k <= config.steps; ++k) {
    const double lambda = kTwoPi * static_cast<double>(k) / static_cast<double>(config.steps);
    for (std::uint64_t t = 0; t < dim; ++t) {
      const double theta = eigenangle(params, labels[t], lambda);
      if (json) {
        out << (first ? "" : ",") << "[" << format_double(lambda) << "," << m_strings[t] << ","
            << format_double(theta) << "]";
        first = false;
      } else {
        out << format_double(lambda) << "," << m_strings[t] << "," << format_double(theta)
            << "\n";
      }
    }
  }
  if (json) out << "]}\n";
}

void run_itinerary(const RunConfig& config, std::ostream& out) {
  const CircuitParams& params = config.params;
  params.validate();
  const int n = params.qubits();
  if (n > 20) throw InstanceTooLargeError("itinerary labels are capped at 20 qubits");
  const long long count = config.cycles > 0 ? config.cycles : (1LL << n);
  const auto seq = itinerary(params, QuantumNumbers::zeros(n), static_cast<int>(count));

  const bool json = config.format == Format::json;
  if (json)
    out << "{\"columns\":[\"step\",\"bits\",\"m\"],\"rows\":[";
  else
    out << "step,bits,m\n";
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const std::string m = principal_number(params, seq[k]).residue().str();
    if (json)
      out << (k ? "," : "") << "[" << k << ",\"" << seq[k].str() << "\"," << m << "]";
    else
      out << k << "," << seq[k].str() << "," << m << "\n";
  }
  if (json) out << "]}\n";
}

void emit_matrix_json(std::ostream& out, const Matrix& m) {
  out << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << (i ? "," : "") << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << "{\"re\":" << format_double(m(i, j).real())
          << ",\"im\":" << format_double(m(i, j).imag()) << "}";
    out << "]";
  }
  out << "]";
}

void emit_matrix_csv(std::ostream& out, const char* tag, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << tag << "," << i << "," << j << "," << format_double(m(i, j).real()) << ","
          << format_double(m(i, j).imag()) << "\n";
}

void run_holonomy(const RunConfig& config, std::ostream& out) {
  const CircuitParams& params = config.params;
  params.validate();
  if (!params.all_odd())
    throw OddParamsRequiredError(
        "the holonomy subcommand compares against the closed-form recursion, which needs "
        "all-odd p");
  const HolonomyMatrix analytic = holonomy_analytic(params);
  const Matrix frame0 = analytic_frame(params, 0.0);
  const int dim = 1 << params.qubits();
  const UnitaryFamily family = [&params, &config](double lambda) {
    return build_UN(lambda, params, QubitBasis::standard(), config.max_qubits);
  };
  const NumericHolonomy numeric =
      holonomy_numeric(family, dim, static_cast<int>(config.steps), &frame0);
  const double deviation = max_abs(numeric.matrix.m - analytic.m);

  if (config.format == Format::json) {
    out << "{\"analytic\":";
    emit_matrix_json(out, analytic.m);
    out << ",\"numeric\":";
    emit_matrix_json(out, numeric.matrix.m);
    out << ",\"max_deviation\":" << format_double(deviation)
        << ",\"steps_used\":" << numeric.trace.steps_used << "}\n";
  } else {
    emit_matrix_csv(out, "analytic", analytic.m);
    emit_matrix_csv(out, "numeric", numeric.matrix.m);
    out << "max_deviation," << format_double(deviation) << "\n";
    out << "steps_used," << numeric.trace.steps_used << "\n";
  }
}

void run_winding(const RunConfig& config, std::ostream& out) {
  const CircuitParams& params = config.params;
  params.validate();
  const WideInt analytic = winding_number_analytic(params);
  const int dim = 1 << params.qubits();
  const UnitaryFamily family = [&params, &config](double lambda) {
    return build_UN(lambda, params, QubitBasis::standard(), config.max_qubits);
  };
  const double raw = winding_number_raw(family, dim, static_cast<int>(config.steps));
  const long long rounded = std::llround(raw);
  if (std::abs(raw - static_cast<double>(rounded)) > 0.1) throw QuadratureNotConvergedError(raw);

  if (config.format == Format::json) {
    out << "{\"nu_analytic\":" << analytic.str() << ",\"nu_numeric\":" << rounded
        << ",\"quadrature\":" << format_double(raw) << "}\n";
  } else {
    out << "nu_analytic," << analytic.str() << "\n";
    out << "nu_numeric," << rounded << "\n";
    out << "quadrature," << format_double(raw) << "\n";
  }
}

void run_subset_sum(const RunConfig& config, std::ostream& out) {
  const CircuitParams& params = config.params;
  params.validate();
  const int n = params.qubits();
  if (n > 12) throw InstanceTooLargeError("the decode table is capped at 12 qubits");
  const std::vector<WideInt> weights = ladder_weights(params);
  const std::uint64_t dim = 1ULL << n;

  WideInt total = 0;
  for (const WideInt& w : weights) total += w;
  const WideInt plain_cells = (WideInt(n) + 1) * (total + 1);
  const long long modular_cells = (n + 1) * static_cast<long long>(dim);
  const bool gapped = !params.degenerate_spectrum();
  const double gap = gapped ? spectral_gap(params) : 0.0;

  std::vector<std::vector<QuantumNumbers>> table;
  table.reserve(dim);
  for (std::uint64_t m = 0; m < dim; ++m)
    table.push_back(decode(params, WideInt(static_cast<long long>(m)), true));

  if (config.format == Format::json) {
    out << "{\"weights\":[";
    for (std::size_t j = 0; j < weights.size(); ++j)
      out << (j ? "," : "") << weights[j].str();
    out << "],\"decode\":[";
    for (std::uint64_t m = 0; m < dim; ++m) {
      out << (m ? "," : "") << "{\"m\":" << m << ",\"labels\":[";
      for (std::size_t i = 0; i < table[m].size(); ++i)
        out << (i ? "," : "") << "\"" << table[m][i].str() << "\"";
      out << "]}";
    }
    out << "]";
    if (gapped)
      out << ",\"gap\":" << format_double(gap)
          << ",\"adiabatic_heuristic\":" << format_double(1.0 / (gap * gap));
    out << ",\"work\":{\"subsets\":" << dim << ",\"modular_cells\":" << modular_cells
        << ",\"plain_cells\":" << plain_cells.str() << "}}\n";
  } else {
    for (std::size_t j = 0; j < weights.size(); ++j)
      out << "weight," << j + 1 << "," << weights[j].str() << "\n";
    for (std::uint64_t m = 0; m < dim; ++m) {
      out << "residue," << m << "," << table[m].size();
      for (const QuantumNumbers& label : table[m]) out << "," << label.str();
      out << "\n";
    }
    if (gapped) {
      out << "gap," << format_double(gap) << "\n";
      out << "adiabatic_heuristic," << format_double(1.0 / (gap * gap)) << "\n";
    }
    out << "work_subsets," << dim << "\n";
    out << "work_modular_cells," << modular_cells << "\n";
    out << "work_plain_cells," << plain_cells.str() << "\n";
  }
}

void expect(bool condition, const std::string& what) {
  if (!condition) throw Error(what);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::string bits_of(const std::vector<QuantumNumbers>& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ",";
    out += seq[i].str();
  }
  return out;
}

}  // namespace

int run_verification(std::ostream& out) {
  struct Check {
    const char* name;
    std::function<void()> body;
  };
  std::vector<Check> checks;

  checks.push_back({"unitary-constructions", [] {
    for (const double lambda : {0.0, 0.7, 3.9}) {
      for (long long p = 0; p <= 3; ++p) {
        expect(is_unitary(build_u(lambda, p)), "build_u not unitary");
        expect(is_unitary(build_uY(lambda, p)), "build_uY not unitary");
      }
      expect(is_unitary(build_UN(lambda, CircuitParams{{1, 3}})), "build_UN not unitary");
      expect(is_unitary(build_UN(lambda, CircuitParams{{2, 1, 1}})), "build_UN not unitary");
      // Feeding a bare phase through the dressed lift must reproduce u on
      // the new qubit.
      const Matrix inner = std::exp(Complex(0, lambda)) * Matrix::Identity(2, 2);
      const Matrix zfull =
          kron(Matrix(QubitBasis::standard().z_op()), Matrix::Identity(2, 2));
      const Matrix lifted = controlled_gate(inner, 3) * zfull;
      const Matrix expected = kron(build_u(lambda, 3), Matrix::Identity(2, 2));
      expect(max_abs(lifted - expected) <= 1e-12, "phase retrieval identity");
    }
  }});

  checks.push_back({"single-qubit-holonomy", [] {
    for (long long p = 0; p <= 3; ++p) {
      const CircuitParams params{{p}};
      const Matrix frame0 = analytic_frame(params, 0.0);
      const UnitaryFamily family = [p](double lambda) { return build_u(lambda, p); };
      const NumericHolonomy numeric = holonomy_numeric(family, 2, 1024, &frame0);
      const double deviation = max_abs(numeric.matrix.m - holonomy_single(p).m);
      expect(deviation <= 1e-6,
             "p = " + std::to_string(p) + " deviates by " + format_double(deviation));
    }
  }});

  checks.push_back({"spectrum-ladder", [] {
    const CircuitParams params{{1, 1, 1}};
    for (int k = 0; k <= 64; ++k) {
      const double lambda = kTwoPi * k / 64;
      const EigenFrame frame = eig_unitary(build_UN(lambda, params));
      expect(std::abs(frame.min_circular_gap() - kTwoPi / 8) <= 1e-10, "gap drift");
      for (std::uint64_t t = 0; t < 8; ++t) {
        const double want =
            wrap_angle(eigenangle(params, QuantumNumbers::from_index(3, t), lambda));
        double best = kTwoPi;
        for (int i = 0; i < 8; ++i)
          best = std::min(best, circular_distance(frame.angles[i], want));
        expect(best <= 1e-10, "eigenangle off the predicted rung");
      }
    }
  }});

  checks.push_back({"itinerary-goldens", [] {
    const auto run_one = [](std::vector<long long> p, int count, const char* golden) {
      const CircuitParams params{std::move(p)};
      const auto seq = itinerary(params, QuantumNumbers::zeros(params.qubits()), count);
      expect(bits_of(seq) == golden, "itinerary " + bits_of(seq) + " wanted " + golden);
    };
    run_one({1, 1, 1}, 8, "000,001,010,011,100,101,110,111,000");
    run_one({3, 1, 1}, 8, "000,011,110,001,100,111,010,101,000");
    run_one({1, 3, 1}, 8, "000,001,110,111,100,101,010,011,000");
    run_one({2, 1, 1}, 4, "000,010,100,110,000");
    QuantumNumbers one = QuantumNumbers::zeros(3);
    one.set_bit(1, 1);
    const auto seq = itinerary(CircuitParams{{2, 1, 1}}, one, 4);
    expect(bits_of(seq) == "001,011,101,111,001", "second even-first cycle: " + bits_of(seq));
  }});

  checks.push_back({"closed-form-oracle", [] {
    const auto check_family = [](const CircuitParams& params, const FamilySpec& spec) {
      const int n = params.qubits();
      for (std::uint64_t t = 0; t < (1ULL << n); ++t) {
        const QuantumNumbers label = QuantumNumbers::from_index(n, t);
        const SrResult full = sr_full(params, label);
        const SrPair closed = closed_form_sr(params, label, spec);
        expect(full.s == closed.s && full.r == closed.r,
               "closed form deviates at " + label.str());
      }
    };
    check_family(CircuitParams{std::vector<long long>(6, 1)}, {Family::simplest, 0, 0});
    CircuitParams even_first{std::vector<long long>(6, 1)};
    even_first.p[0] = 2;
    check_family(even_first, {Family::even_first, 0, 0});
    CircuitParams impurity{std::vector<long long>(6, 1)};
    impurity.p[2] = 1 + (1 << 2);
    check_family(impurity, {Family::impurity, 3, 2});
  }});

  checks.push_back({"balance-and-sum-rule", [] {
    std::mt19937_64 rng(12345);
    for (int draw = 0; draw < 20; ++draw) {
      const int n = 1 + static_cast<int>(rng() % 6);
      std::vector<long long> p(n);
      for (auto& pj : p) pj = 1 + 2 * static_cast<long long>(rng() % 4);
      const CircuitParams params{std::move(p)};
      const WideInt d = slope(params);
      WideInt r_sum = 0;
      for (std::uint64_t t = 0; t < (1ULL << n); ++t) {
        const QuantumNumbers label = QuantumNumbers::from_index(n, t);
        const SrResult res = sr_full(params, label);
        const WideInt lhs = principal_number(params, res.s).m;
        const WideInt rhs = principal_number(params, label).m + d - WideInt::pow2(n) * res.r;
        expect(lhs == rhs, "balance identity fails at " + label.str());
        r_sum += res.r;
      }
      expect(r_sum == d, "winding sum rule fails");
    }
  }});

  checks.push_back({"gamma-routes", [] {
    const CircuitParams params{{1, 3}};
    const std::vector<double> det_route = cycle_phases(holonomy_analytic(params));
    expect(det_route.size() == 1 && std::abs(det_route[0] - kPi) <= 1e-12, "det sigma route");
    expect(slope(params).mod2() == 1, "parity route expects an odd slope");
    const Matrix frame0 = analytic_frame(params, 0.0);
    const UnitaryFamily family = [&params](double lambda) { return build_UN(lambda, params); };
    const double berry = berry_phase_extended_cycle(family, 4, 1024, 4, 0, &frame0);
    expect(std::abs(berry - kPi) <= 1e-3, "extended-cycle route off by " +
                                              format_double(std::abs(berry - kPi)));
  }});

  checks.push_back({"winding-quadrature", [] {
    expect(winding_number([](double l) { return build_u(l, 3); }, 2, 1024) == 3, "u at p = 3");
    expect(winding_number([](double l) { return build_uY(l, 3); }, 2, 2048) == 3,
           "uY at p = 3 despite the on-path crossing");
    const CircuitParams params{{1, 3}};
    const UnitaryFamily family = [&params](double lambda) { return build_UN(lambda, params); };
    expect(winding_number(family, 4, 1024) == 3, "hierarchical [1, 3]");
    expect(winding_number_analytic(params) == WideInt(3), "slope route");
  }});

  checks.push_back({"degeneracy-flag", [] {
    const auto windows = [](std::vector<long long> p) {
      const CircuitParams params{std::move(p)};
      const UnitaryFamily family = [&params](double l) { return build_UN(l, params); };
      return degeneracy_scan(family, 1 << params.qubits(), 256);
    };
    expect(!windows({1, 2}).empty(), "even p_2 must produce a crossing");
    expect(windows({1, 3}).empty(), "all-odd must stay gapped");
    expect(windows({2, 1}).empty(), "even p_1 alone stays gapped");
  }});

  checks.push_back({"subset-sum-decode", [] {
    const CircuitParams params{{1, 3, 1}};
    for (std::uint64_t m = 0; m < 8; ++m) {
      const auto labels = decode(params, WideInt(static_cast<long long>(m)), true);
      expect(labels.size() == 1, "decode multiplicity at residue " + std::to_string(m));
      const auto sols = solve_subset_sum(
          instance_from_params(params, WideInt(static_cast<long long>(m)), true),
          SolveMethod::dp);
      expect(sols.size() == 1, "modular dp count at residue " + std::to_string(m));
      QuantumNumbers from_dp = QuantumNumbers::zeros(3);
      for (const int item : sols[0]) from_dp.set_bit(item + 1, 1);
      expect(from_dp == labels[0], "dp disagrees with decode at residue " + std::to_string(m));
    }
    const QuantumNumbers probe = QuantumNumbers::from_index(3, 5);
    const WideInt target = principal_number(params, probe).m;
    const auto dp = solve_subset_sum(instance_from_params(params, target, false),
                                     SolveMethod::dp);
    const auto brute = solve_subset_sum(instance_from_params(params, target, false),
                                        SolveMethod::brute);
    expect(dp.size() == 1 && brute.size() == 1 && dp[0] == brute[0], "plain dp vs brute");
  }});

  checks.push_back({"gauge-covariance", [] {
    const CircuitParams params{{1, 3}};
    const HolonomyMatrix base = holonomy_analytic(params);
    const Permutation pattern = base.permutation();
    const std::vector<double> phases0 = cycle_phases(base);
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> phases(4);
      for (auto& x : phases) x = angle(rng);
      const HolonomyMatrix transformed = gauge_transform(base, phases);
      expect(transformed.permutation() == pattern, "gauge transform moved the pattern");
      const std::vector<double> phases1 = cycle_phases(transformed);
      expect(phases1.size() == phases0.size(), "cycle count changed");
      for (std::size_t c = 0; c < phases1.size(); ++c)
        expect(circular_distance(phases1[c], phases0[c]) <= 1e-10, "cycle phase drifted");
    }
  }});

  checks.push_back({"report-and-config-round-trip", [] {
    const HolonomyReport report = make_report(CircuitParams{{1, 1, 1}});
    const HolonomyReport back = parse_report(emit_report(report, Format::json));
    expect(back.params.p == report.params.p && back.d == report.d && back.nu == report.nu &&
               back.degenerate == report.degenerate && back.cycles == report.cycles,
           "structural fields changed");
    expect(back.gamma == report.gamma && back.sigma.size() == report.sigma.size(),
           "payload changed");
    for (std::size_t k = 0; k < back.sigma.size(); ++k)
      expect(back.sigma[k] == report.sigma[k], "sigma changed");
    const RunConfig a = parse_config("qubits = 3\np = [3, 1, 1]");
    expect(a.params.p == std::vector<long long>({3, 1, 1}) && a.steps == 1024 &&
               a.format == Format::csv,
           "defaults example");
    bool flagged = false;
    try {
      parse_config("qubits = 2\np = [1, 1, 1]");
    } catch (const ParseError& e) {
      flagged = e.line == 2;
    }
    expect(flagged, "length mismatch must point at line 2");
    const RunConfig c = parse_config("# comment\nqubits=1\np=[5]");
    expect(c.params.qubits() == 1 && c.params.p[0] == 5, "comment tolerance example");
  }});

  int failures = 0;
  for (const Check& check : checks) {
    try {
      check.body();
      out << "PASS " << check.name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      out << "FAIL " << check.name << ": " << e.what() << "\n";
    }
  }
  out << (failures ? "FAILED " : "OK ") << (checks.size() - failures) << "/" << checks.size()
      << " checks\n";
  return failures;
}

int run(const std::string& subcommand, const RunConfig& config, std::ostream& out,
        std::ostream& err) {
  try {
    if (subcommand == "spectrum")
      run_spectrum(config, out);
    else if (subcommand == "itinerary")
      run_itinerary(config, out);
    else if (subcommand == "invariants")
      out << emit_report(
          make_report(config.params, static_cast<int>(config.steps), config.max_qubits),
          config.format);
    else if (subcommand == "holonomy")
      run_holonomy(config, out);
    else if (subcommand == "winding")
      run_winding(config, out);
    else if (subcommand == "subset-sum")
      run_subset_sum(config, out);
    else if (subcommand == "verify")
      return run_verification(out) == 0 ? 0 : 1;
    else
      throw Error("unknown subcommand '" + subcommand + "'");
    return 0;
  } catch (const ParseError& e) {
    emit_error(err, "parse", e.what());
  } catch (const DegenerateSpectrumError& e) {
    emit_error(err, "degenerate-spectrum", e.what());
  } catch (const FamilyMismatchError& e) {
    emit_error(err, "family-mismatch", e.what());
  } catch (const OddParamsRequiredError& e) {
    emit_error(err, "odd-params-required", e.what());
  } catch (const DegeneracyOnPathError& e) {
    emit_error(err, "degeneracy-on-path", e.what());
  } catch (const UnderResolvedError& e) {
    emit_error(err, "under-resolved", e.what());
  } catch (const NotPeriodicError& e) {
    emit_error(err, "not-periodic", e.what());
  } catch (const NotClosedError& e) {
    emit_error(err, "not-closed", e.what());
  } catch (const QuadratureNotConvergedError& e) {
    emit_error(err, "quadrature-not-converged", e.what());
  } catch (const DimensionOverflowError& e) {
    emit_error(err, "dimension-overflow", e.what());
  } catch (const InstanceTooLargeError& e) {
    emit_error(err, "instance-too-large", e.what());
  } catch (const NonPositiveParamsError& e) {
    emit_error(err, "non-positive-params", e.what());
  } catch (const NotUnitaryError& e) {
    emit_error(err, "not-unitary", e.what());
  } catch (const NoConvergenceError& e) {
    emit_error(err, "no-convergence", e.what());
  } catch (const OverflowError& e) {
    emit_error(err, "integer-overflow", e.what());
  } catch (const Error& e) {
    emit_error(err, "error", e.what());
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what());
  }
  return 1;
}

}  // namespace anholonomy::cli
