#include "auq/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "auq/error.hpp"

namespace auq::estimators {

std::string EquivalenceMap::normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isspace(c) || c == '-' || c == '_' || c == '/') {
      pending_space = !out.empty();
      continue;
    }
    if (c < 0x80 && std::ispunct(c)) continue;
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
  }
  return out;
}

EquivalenceMap::EquivalenceMap(const std::map<std::string, std::string>& aliases) {
  std::map<std::string, std::string, std::less<>> raw;
  for (const auto& [from, to] : aliases) {
    auto key = normalize_text(from);
    auto value = normalize_text(to);
    if (key != value) raw[key] = value;
  }
  for (const auto& [key, first] : raw) {
    std::string target = first;
    std::set<std::string> visited{key};
    for (auto it = raw.find(target); it != raw.end(); it = raw.find(target)) {
      if (!visited.insert(target).second) {
        throw ValidationError("equivalence map: alias cycle through '" + key + "'");
      }
      target = it->second;
    }
    if (target == key) throw ValidationError("equivalence map: alias cycle through '" + key + "'");
    aliases_[key] = target;
  }
}

std::string EquivalenceMap::canonical(std::string_view s) const {
  auto norm = normalize_text(s);
  if (auto it = aliases_.find(norm); it != aliases_.end()) return it->second;
  return norm;
}

Categorical cluster(const AnswerSampleSet& set, const EquivalenceMap& eq) {
  if (set.samples.empty()) throw ValidationError("cluster: question '" + set.question_id + "' has no samples");
  std::map<std::string, std::vector<double>> mass;
  for (const auto& s : set.samples) {
    if (!(s.seq_prob >= 0.0 && s.seq_prob <= 1.0)) {
      throw ValidationError("cluster: seq_prob outside [0, 1] in question '" + set.question_id + "'");
    }
    mass[eq.canonical(s.cluster ? *s.cluster : s.text)].push_back(s.seq_prob);
  }
  // Summing sorted values makes the result bit-identical under sample reordering.
  std::vector<std::string> classes;
  std::vector<double> probs;
  double total = 0.0;
  for (auto& [cls, values] : mass) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    classes.push_back(cls);
    probs.push_back(sum);
    total += sum;
  }
  if (total <= 0.0) {
    throw DegenerateInputError("cluster: all sequence probabilities are zero in question '" + set.question_id + "'");
  }
  for (double& v : probs) v /= total;
  return Categorical(std::move(classes), std::move(probs));
}

namespace {

// Canonicalizes class ids, merging classes that collapse onto one id.
void accumulate(const Categorical& dist, const EquivalenceMap& eq, std::vector<std::string>& order,
                std::map<std::string, double>& mass) {
  for (std::size_t i = 0; i < dist.size(); ++i) {
    auto id = eq.canonical(dist.classes()[i]);
    auto [it, inserted] = mass.try_emplace(id, 0.0);
    if (inserted) order.push_back(id);
    it->second += dist[i];
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("epsilon must lie in (0, 1) (got " + std::to_string(epsilon) + ")");
  }
}

std::vector<double> impute(const std::vector<std::string>& order, const std::map<std::string, double>& mass,
                           double epsilon) {
  std::vector<double> probs;
  probs.reserve(order.size());
  double total = 0.0;
  bool imputed = false;
  for (const auto& id : order) {
    auto it = mass.find(id);
    const bool missing = it == mass.end() || it->second <= 0.0;
    imputed = imputed || missing;
    const double v = missing ? epsilon : it->second;
    probs.push_back(v);
    total += v;
  }
  // Nothing imputed: the input already sums to one, so leave it bit-identical.
  if (imputed) {
    for (double& v : probs) v /= total;
  }
  return probs;
}

}  // namespace

Aligned align(const Categorical& p_star, const Categorical& p_model, const EquivalenceMap& eq, double epsilon) {
  check_epsilon(epsilon);
  std::vector<std::string> order;
  std::map<std::string, double> star_mass;
  std::map<std::string, double> model_mass;
  accumulate(p_star, eq, order, star_mass);
  std::vector<std::string> model_order;
  accumulate(p_model, eq, model_order, model_mass);
  for (const auto& id : model_order) {
    if (!star_mass.contains(id)) order.push_back(id);
  }

  std::vector<double> star;
  star.reserve(order.size());
  for (const auto& id : order) {
    auto it = star_mass.find(id);
    star.push_back(it == star_mass.end() ? 0.0 : it->second);
  }
  auto model = impute(order, model_mass, epsilon);
  return {Categorical(order, std::move(star)), Categorical(order, std::move(model))};
}

std::vector<Categorical> align_ensemble(const std::vector<Categorical>& members, const EquivalenceMap& eq,
                                        double epsilon) {
  check_epsilon(epsilon);
  std::vector<std::string> order;
  std::vector<std::map<std::string, double>> masses(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) {
    std::vector<std::string> member_order;
    accumulate(members[m], eq, member_order, masses[m]);
    for (auto& id : member_order) {
      if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
    }
  }
  std::vector<Categorical> out;
  out.reserve(members.size());
  for (const auto& mass : masses) out.emplace_back(order, impute(order, mass, epsilon));
  return out;
}

double semantic_entropy(const Categorical& p) { return entropy(p); }

double msp(std::optional<double> best_answer_prob) {
  if (!best_answer_prob) {
    throw UnavailableError("msp: best_answer_prob (beam-search maximum) is missing");
  }
  const double v = *best_answer_prob;
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("msp: best_answer_prob must lie in (0, 1]");
  return 1.0 - v;
}

namespace {

void check_members(const EnsemblePrediction& e) {
  if (e.members.empty()) throw ValidationError("ensemble: no members");
  for (const auto& m : e.members) {
    if (!m.same_support(e.members.front())) throw ValidationError("ensemble: members are not aligned");
  }
}

}  // namespace

Categorical ensemble_mean(const EnsemblePrediction& e) {
  check_members(e);
  std::vector<double> mean(e.members.front().size(), 0.0);
  for (const auto& m : e.members) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += m[i];
  }
  for (double& v : mean) v /= static_cast<double>(e.members.size());
  return Categorical(e.members.front().classes(), std::move(mean));
}

double mutual_information(const EnsemblePrediction& e) {
  const auto mean = ensemble_mean(e);
  double mi = 0.0;
  for (const auto& m : e.members) mi += kl(m, mean);
  return mi / static_cast<double>(e.members.size());
}

double mutual_information_entropy_form(const EnsemblePrediction& e) {
  const auto mean = ensemble_mean(e);
  double member_entropy = 0.0;
  for (const auto& m : e.members) member_entropy += entropy(m);
  return entropy(mean) - member_entropy / static_cast<double>(e.members.size());
}

void EstimatorRegistry::add(std::string name, EstimatorFn fn) {
  for (auto& [existing, f] : entries_) {
    if (existing == name) {
      f = std::move(fn);
      return;
    }
  }
  entries_.emplace_back(std::move(name), std::move(fn));
}

EstimatorRegistry EstimatorRegistry::with_defaults() {
  EstimatorRegistry r;
  r.add("semantic_entropy", [](const EstimatorContext& ctx) { return semantic_entropy(ctx.clustered); });
  r.add("msp", [](const EstimatorContext& ctx) { return msp(ctx.input.samples.best_answer_prob); });
  r.add("mutual_information", [](const EstimatorContext& ctx) {
    if (ctx.input.ensemble.empty()) throw UnavailableError("mutual_information: no ensemble members supplied");
    return mutual_information({align_ensemble(ctx.input.ensemble, ctx.eq, ctx.epsilon)});
  });
  return r;
}

}  // namespace auq::estimators
