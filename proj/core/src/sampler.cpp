#include "dragen/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "dragen/error.hpp"

namespace dragen {

namespace {

constexpr std::uint32_t kGroundSlot = 0x8000'0000U;

Term ground_atom(GroundKind kind, Rng& rng) {
  switch (kind) {
    case GroundKind::Int: return rng.between(-100, 100);
    case GroundKind::Double: return rng.uniform();
    case GroundKind::Char: return static_cast<char>(rng.between(32, 126));
    case GroundKind::Unit: return Unit{};
  }
  return Unit{};
}

}  // namespace

Sampler::Sampler(const Universe& u, const GenSpec& spec, std::uint64_t derive_budget)
    : universe_(&u), strategy_(spec.strategy), size_(spec.size), budget_(derive_budget) {
  if (!spec.universe_hash.empty() && spec.universe_hash != u.hash()) {
    throw ModelError("generator spec was built for a different set of declarations");
  }
  const bool weighted = strategy_ == Strategy::Dragen;
  if (weighted) {
    if (spec.probabilities.size() != u.constructors().size()) {
      throw ModelError("generator spec does not cover every constructor");
    }
    if (spec.star.values.size() != u.family_constructor_count() &&
        spec.star.values.size() != u.constructors().size()) {
      throw ModelError("generator spec is missing terminal probabilities");
    }
  }

  auto build = [&](std::vector<ConstructorId> ids, auto&& weight) {
    Choice choice;
    choice.constructors = std::move(ids);
    if (!weighted) return choice;
    double total = 0.0;
    for (ConstructorId c : choice.constructors) {
      total += weight(c);
      choice.cumulative.push_back(total);
    }
    if (total <= 0.0) choice.cumulative.clear();
    return choice;
  };

  for (const TypeInfo& t : u.types()) {
    any_.push_back(build(t.constructors, [&](ConstructorId c) { return spec.probabilities[c]; }));
  }
  for (TypeId t : u.family()) {
    std::vector<ConstructorId> terminals = terminal_constructors(u, t);
    if (terminals.empty() && strategy_ != Strategy::Derive) {
      throw ModelError("type '" + u.type(t).id + "' has no terminal constructor");
    }
    terminal_.push_back(build(std::move(terminals), [&](ConstructorId c) { return spec.star[c]; }));
  }
  slot_offsets_.push_back(0);
  for (const ConstructorInfo& info : u.constructors()) {
    for (auto it = info.fields.rbegin(); it != info.fields.rend(); ++it) {
      slots_.push_back(it->kind == FieldRef::Kind::Ground
                           ? kGroundSlot | static_cast<std::uint32_t>(it->ground)
                           : it->type.value);
    }
    slot_offsets_.push_back(static_cast<std::uint32_t>(slots_.size()));
  }
}

ConstructorId Sampler::pick(const Choice& choice, Rng& rng) const {
  if (choice.cumulative.empty()) return choice.constructors[rng.below(choice.constructors.size())];
  const double r = rng.uniform() * choice.cumulative.back();
  auto it = std::upper_bound(choice.cumulative.begin(), choice.cumulative.end(), r);
  if (it == choice.cumulative.end()) --it;
  return choice.constructors[static_cast<std::size_t>(it - choice.cumulative.begin())];
}

std::optional<Value> Sampler::draw(Rng& rng) const {
  return strategy_ == Strategy::Derive ? draw_unbounded(rng) : draw_bounded(rng);
}

std::optional<Value> Sampler::draw_bounded(Rng& rng) const {
  struct Slot {
    FieldRef field;
    unsigned size;
  };
  const Universe& u = *universe_;
  std::vector<Term> terms;
  std::vector<Slot> pending{{FieldRef{FieldRef::Kind::Family, u.root(), GroundKind::Unit}, size_}};
  while (!pending.empty()) {
    const Slot slot = pending.back();
    pending.pop_back();
    if (slot.field.kind == FieldRef::Kind::Ground) {
      terms.push_back(ground_atom(slot.field.ground, rng));
      continue;
    }
    const TypeId t = slot.field.type;
    const bool family = slot.field.kind == FieldRef::Kind::Family;
    const ConstructorId c = family && slot.size == 0 ? pick(terminal_[t.value], rng)
                                                     : pick(any_[t.value], rng);
    terms.emplace_back(c);
    const unsigned child_size =
        !family ? slot.size : (strategy_ == Strategy::Megadeth ? slot.size / 2 : slot.size - 1);
    const auto& fields = u.constructor(c).fields;
    for (auto it = fields.rbegin(); it != fields.rend(); ++it) pending.push_back({*it, child_size});
  }
  return Value(std::move(terms));
}

std::optional<Value> Sampler::draw_unbounded(Rng& rng) const {
  const Universe& u = *universe_;
  std::vector<Term> terms;
  std::vector<FieldRef> pending{FieldRef{FieldRef::Kind::Family, u.root(), GroundKind::Unit}};
  std::uint64_t emitted = 0;
  while (!pending.empty()) {
    const FieldRef field = pending.back();
    pending.pop_back();
    if (field.kind == FieldRef::Kind::Ground) {
      terms.push_back(ground_atom(field.ground, rng));
      continue;
    }
    if (emitted == budget_) return std::nullopt;
    ++emitted;
    const auto& ids = any_[field.type.value].constructors;
    const ConstructorId c = ids[rng.below(ids.size())];
    terms.emplace_back(c);
    const auto& fields = u.constructor(c).fields;
    pending.insert(pending.end(), fields.rbegin(), fields.rend());
  }
  return Value(std::move(terms));
}

std::optional<std::uint64_t> Sampler::draw_counts(Rng& rng, std::span<std::uint64_t> counts) const {
  if (strategy_ != Strategy::Derive) {
    const std::optional<Value> v = draw_bounded(rng);
    return accumulate_counts(*v, counts);
  }
  // Run-length encoded pending stack: equal adjacent slots are
  // interchangeable, so popping from a run keeps the draw order of
  // draw_unbounded while aborting runs stay cheap.
  struct Run {
    std::uint32_t slot;
    std::uint64_t count;
  };
  std::vector<Run> pending{{universe_->root().value, 1}};
  std::uint64_t emitted = 0;
  while (!pending.empty()) {
    Run& top = pending.back();
    const std::uint32_t slot = top.slot;
    if (--top.count == 0) pending.pop_back();
    if ((slot & kGroundSlot) != 0) {
      ground_atom(static_cast<GroundKind>(slot & ~kGroundSlot), rng);
      continue;
    }
    if (emitted == budget_) return std::nullopt;
    ++emitted;
    const auto& ids = any_[slot].constructors;
    const std::uint32_t c = ids[rng.below(ids.size())].value;
    ++counts[c];
    for (std::uint32_t i = slot_offsets_[c]; i < slot_offsets_[c + 1]; ++i) {
      if (!pending.empty() && pending.back().slot == slots_[i]) {
        ++pending.back().count;
      } else {
        pending.push_back({slots_[i], 1});
      }
    }
  }
  return emitted;
}

Value sample_dragen(const Universe& u, const GenSpec& spec, Rng& rng) {
  GenSpec s = spec;
  s.strategy = Strategy::Dragen;
  return *Sampler(u, s).draw(rng);
}

Value sample_megadeth(const Universe& u, unsigned size, Rng& rng) {
  return *Sampler(u, uniform_spec(u, size, Strategy::Megadeth)).draw(rng);
}

std::optional<Value> sample_derive(const Universe& u, std::uint64_t budget, Rng& rng) {
  return Sampler(u, uniform_spec(u, 0, Strategy::Derive), budget).draw(rng);
}

namespace {

constexpr std::size_t kBlock = 256;

struct BlockTotals {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::size_t exhausted = 0;
};

}  // namespace

SampleStats empirical_stats(const Universe& u, const GenSpec& spec, std::size_t samples,
                            std::uint64_t seed, const SampleOptions& options) {
  const Sampler sampler(u, spec, options.derive_budget);
  const std::size_t n_ctors = u.constructors().size();
  const std::size_t n_blocks = (samples + kBlock - 1) / kBlock;
  std::vector<BlockTotals> blocks(n_blocks);

  std::atomic<std::size_t> next_block{0};
  auto worker = [&] {
    std::vector<std::uint64_t> counts(n_ctors);
    for (std::size_t b = next_block++; b < n_blocks; b = next_block++) {
      BlockTotals& totals = blocks[b];
      totals.sum.assign(n_ctors, 0.0);
      totals.sum_sq.assign(n_ctors, 0.0);
      const std::size_t end = std::min(samples, (b + 1) * kBlock);
      for (std::size_t i = b * kBlock; i < end; ++i) {
        Rng rng = Rng::for_stream(seed, i);
        std::fill(counts.begin(), counts.end(), 0);
        const std::optional<std::uint64_t> total = sampler.draw_counts(rng, counts);
        if (!total) {
          ++totals.exhausted;
          continue;
        }
        ++totals.histogram[*total];
        for (std::size_t c = 0; c < n_ctors; ++c) {
          const auto x = static_cast<double>(counts[c]);
          totals.sum[c] += x;
          totals.sum_sq[c] += x * x;
        }
      }
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n_blocks, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  SampleStats stats;
  stats.samples = samples;
  std::vector<double> sum(n_ctors, 0.0), sum_sq(n_ctors, 0.0);
  for (const BlockTotals& totals : blocks) {
    for (std::size_t c = 0; c < n_ctors; ++c) {
      sum[c] += totals.sum[c];
      sum_sq[c] += totals.sum_sq[c];
    }
    for (const auto& [size, freq] : totals.histogram) stats.size_histogram[size] += freq;
    stats.budget_exhausted += totals.exhausted;
  }
  const auto n = static_cast<double>(stats.completed());
  stats.mean.assign(n_ctors, 0.0);
  stats.std_err.assign(n_ctors, 0.0);
  if (n == 0) return stats;
  for (std::size_t c = 0; c < n_ctors; ++c) {
    const double mean = sum[c] / n;
    stats.mean[c] = mean;
    if (n > 1) {
      const double var = std::max(0.0, (sum_sq[c] - n * mean * mean) / (n - 1));
      stats.std_err[c] = std::sqrt(var / n);
    }
  }
  return stats;
}

}  // namespace dragen
