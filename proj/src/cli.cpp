#include "pingcert/cli.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "pingcert/errors.hpp"
#include "pingcert/growth.hpp"
#include "pingcert/io.hpp"

namespace pingcert {

namespace {

std::string approx(const Rational& x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", to_double(x));
  return buf;
}

// A fraction with its decimal value alongside.
std::string show(const Rational& x) { return format_rational(x) + " (~" + approx(x) + ")"; }

std::string show(const RationalInterval& x) {
  RationalInterval r = x.rounded(64);
  return "[" + format_rational(r.lo) + ", " + format_rational(r.hi) + "] (~" + approx(r.midpoint()) + ")";
}

void emit(const JobSpec& spec, const std::string& json, std::ostream& out, const char* what) {
  if (spec.out.empty()) {
    out << json;
    return;
  }
  write_file(spec.out, json);
  out << what << " written to " << spec.out << "\n";
}

template <class C>
int finish_search(const JobSpec& spec, const SearchOutcome<C>& o, std::ostream& out, std::ostream& err) {
  if (!spec.trace_out.empty()) write_file(spec.trace_out, o.trace.str());
  if (!o.found()) {
    err << "not certified: " << o.reason << "\n";
    return kExitNotCertified;
  }
  const C& c = *o.certificate;
  out << "a = " << c.a.to_string() << " (length " << c.a.length() << ")\n";
  out << "b = " << c.b.to_string() << " (length " << c.b.length() << ")\n";
  out << "epsilon = " << format_rational(c.epsilon) << ", r = " << format_rational(c.r) << "\n";
  out << "wedge = " << c.rep.wedge << ", conjugated = " << (c.rep.conjugator.is_identity() ? "no" : "yes") << "\n";
  out << "found_in_power = " << o.found_in_power << "\n";
  emit(spec, certificate_json(c), out, "certificate");
  return kExitOk;
}

int certify(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  auto s = parse_generators(read_file(spec.input));
  if (spec.command == "certify-free") {
    out << "mode: free group (ping-pong)\n";
    return finish_search(spec, find_free_pair(s, spec.budget), out, err);
  }
  out << "mode: free semigroup (ping)\n";
  return finish_search(spec, find_semigroup_pair(s, spec.budget), out, err);
}

int growth(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  auto s = parse_generators(read_file(spec.input));
  GrowthReport r;
  try {
    r = growth_report(*s, spec.radius, 64, {spec.budget.node_cap, true});
  } catch (const BudgetExceeded& e) {
    err << "node cap reached: last complete radius " << e.complete() << "\n";
    return kExitNotCertified;
  }
  out << "n  #Sigma^n  (1/n) log #Sigma^n  inner-boundary ratio\n";
  for (std::size_t n = 0; n < r.ball_sizes.size(); ++n) {
    out << n << "  " << r.ball_sizes[n] << "  ";
    out << (n == 0 ? std::string("-") : show(r.entropy_estimates[n - 1])) << "  " << show(r.cheeger_ratios[n]) << "\n";
  }
  emit(spec, growth_report_json(r), out, "report");
  return kExitOk;
}

int bounds(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  int power = 0;
  CertificateKind kind = CertificateKind::free_group;
  if (!spec.input.empty()) {
    AnyCertificate c = parse_certificate(read_file(spec.input));
    auto problem = std::visit([](const auto& x) { return check_certificate(x); }, c);
    if (problem) {
      err << "invalid certificate: " << *problem << "\n";
      return kExitNotCertified;
    }
    power = std::visit([](const auto& x) { return x.found_in_power; }, c);
    if (std::holds_alternative<SemigroupCertificate>(c)) kind = CertificateKind::semigroup;
  } else if (spec.found_in_power) {
    power = *spec.found_in_power;
    if (spec.kind == "semigroup") kind = CertificateKind::semigroup;
    else if (spec.kind != "free") throw InvalidInput("kind must be free or semigroup");
  } else {
    throw InvalidInput("bounds needs a certificate file or --found-in-power");
  }
  BoundChain b = bound_chain(power, kind, spec.kappa_f2 ? *spec.kappa_f2 : default_kappa_f2());
  out << "d_free = " << b.d_free << ", d_pi = " << b.d_pi << "\n";
  out << "kappa_f2 = " << show(b.kappa_f2) << "\n";
  if (b.kappa_lower) out << "kappa_lower = " << show(*b.kappa_lower) << "\n";
  if (b.h_lower) out << "h_lower = " << show(*b.h_lower) << "\n";
  out << "entropy_lower = " << show(b.entropy_lower) << "\n";
  out << "growth_epsilon = " << show(b.growth_epsilon) << "\n";
  emit(spec, bound_chain_json(b), out, "bounds");
  return kExitOk;
}

int verify(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  AnyCertificate c = parse_certificate(read_file(spec.input));
  auto problem = std::visit([](const auto& x) { return check_certificate(x); }, c);
  if (problem) {
    err << "invalid: " << *problem << "\n";
    return kExitNotCertified;
  }
  int power = std::visit([](const auto& x) { return x.found_in_power; }, c);
  out << "valid " << (std::holds_alternative<FreeGroupCertificate>(c) ? "free group" : "free semigroup")
      << " certificate, found_in_power = " << power << "\n";
  return kExitOk;
}

RationalInterval parse_interval(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) return RationalInterval(parse_rational(text));
  RationalInterval r(parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1)));
  if (r.lo <= 0) throw InvalidInput("kappa_f2 must be positive");
  return r;
}

}  // namespace

int run_job(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.budget.max_power < 1 || spec.budget.max_exponent < 1 || spec.budget.node_cap < 1 || spec.budget.max_candidates < 1 ||
        spec.budget.precision_bits < 1 || spec.radius < 0)
      throw InvalidInput("budgets must be positive");
    if (spec.command == "certify-free" || spec.command == "certify-semigroup") return certify(spec, out, err);
    if (spec.command == "growth") return growth(spec, out, err);
    if (spec.command == "bounds") return bounds(spec, out, err);
    if (spec.command == "verify") return verify(spec, out, err);
    throw InvalidInput("unknown command " + spec.command);
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const Undecided& e) {
    err << "undecided: " << e.what() << "\n";
    return kExitUndecided;
  } catch (const NotFound& e) {
    err << "not found: " << e.what() << "\n";
    return kExitNotCertified;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << " (last complete level " << e.complete() << ")\n";
    return kExitNotCertified;
  }
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  if (const char* t = std::getenv("PINGCERT_THREADS")) {
    int n = std::atoi(t);
    if (n > 0) omp_set_num_threads(n);
  }
  CLI::App app{"pingcert: exact certificates of free subgroups and subsemigroups of matrix groups"};
  app.require_subcommand(1);
  JobSpec spec;
  std::string epsilon, r, kappa;
  std::optional<int> found;
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("input", spec.input, "generating set (JSON)")->required();
    sub->add_option("--max-power", spec.budget.max_power, "words stay in Sigma^n for n up to this");
    sub->add_option("--max-exponent", spec.budget.max_exponent, "cap on powers of the contracting element");
    sub->add_option("--epsilon", epsilon, "ping parameter epsilon (fraction)");
    sub->add_option("--r", r, "proximality parameter r (fraction)");
    sub->add_option("--node-cap", spec.budget.node_cap, "enumeration node cap");
    sub->add_option("--max-candidates", spec.budget.max_candidates, "verifier calls per candidate scan");
    sub->add_option("--precision-bits", spec.budget.precision_bits, "working precision of the frames");
    sub->add_option("--out", spec.out, "certificate output path");
    sub->add_option("--trace", spec.trace_out, "decision trace output path");
  };
  auto* cf = app.add_subcommand("certify-free", "search for a ping-pong pair (free subgroup)");
  add_search(cf);
  auto* cs = app.add_subcommand("certify-semigroup", "search for a ping pair (free subsemigroup)");
  add_search(cs);
  auto* gr = app.add_subcommand("growth", "ball sizes, entropy estimates and inner-boundary ratios");
  gr->add_option("input", spec.input, "generating set (JSON)")->required();
  gr->add_option("--radius", spec.radius, "largest ball radius");
  gr->add_option("--node-cap", spec.budget.node_cap, "enumeration node cap");
  gr->add_option("--out", spec.out, "report output path");
  auto* bd = app.add_subcommand("bounds", "Kazhdan, Cheeger and entropy lower bounds from a certificate");
  bd->add_option("input", spec.input, "certificate (JSON)");
  bd->add_option("--kappa-f2", kappa, "Kazhdan constant of F_2 as \"lo,hi\" or a fraction");
  bd->add_option("--found-in-power", found, "use this power instead of a certificate");
  bd->add_option("--kind", spec.kind, "free or semigroup, with --found-in-power");
  bd->add_option("--out", spec.out, "bounds output path");
  auto* vf = app.add_subcommand("verify", "re-check a certificate file");
  vf->add_option("input", spec.input, "certificate (JSON)")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInvalidInput;
  }
  spec.command = app.get_subcommands().front()->get_name();
  spec.found_in_power = found;
  try {
    if (!epsilon.empty()) spec.budget.epsilon = parse_rational(epsilon);
    if (!r.empty()) spec.budget.r = parse_rational(r);
    if (!kappa.empty()) spec.kappa_f2 = parse_interval(kappa);
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return run_job(spec, out, err);
}

}  // namespace pingcert
