#include "auq/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>

#include "auq/error.hpp"
#include "auq/random.hpp"
#include "auq/stemmer.hpp"

namespace auq::corpus {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Breaks one over-long sentence at spaces, hard-cutting words longer than max_chars.
void split_long_sentence(std::string_view sentence, std::size_t max_chars, std::vector<std::string>& out) {
  while (sentence.size() > max_chars) {
    std::size_t cut = sentence.rfind(' ', max_chars);
    if (cut == std::string_view::npos || cut == 0) cut = max_chars;
    out.emplace_back(trim(sentence.substr(0, cut)));
    sentence = trim(sentence.substr(cut));
  }
  if (!sentence.empty()) out.emplace_back(sentence);
}

std::vector<std::string> split_unit(std::string_view unit, std::size_t max_chars) {
  std::vector<std::string> pieces;
  std::string current;
  for (const auto& sentence : split_sentences(unit)) {
    if (sentence.size() > max_chars) {
      if (!current.empty()) pieces.push_back(std::move(current));
      current.clear();
      split_long_sentence(sentence, max_chars, pieces);
      continue;
    }
    const std::size_t joined = current.empty() ? sentence.size() : current.size() + 1 + sentence.size();
    if (joined > max_chars) {
      pieces.push_back(std::move(current));
      current = sentence;
    } else {
      if (!current.empty()) current.push_back(' ');
      current += sentence;
    }
  }
  if (!current.empty()) pieces.push_back(std::move(current));
  return pieces;
}

Chunk make_chunk(const std::string& doc_id, std::string chunk_id, std::string text) {
  Chunk c{doc_id, std::move(chunk_id), std::move(text), {}};
  c.stemmed_terms = text::stemmed_tokens(c.text);
  std::sort(c.stemmed_terms.begin(), c.stemmed_terms.end());
  c.stemmed_terms.erase(std::unique(c.stemmed_terms.begin(), c.stemmed_terms.end()), c.stemmed_terms.end());
  return c;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      auto s = trim(text.substr(start, i + 1 - start));
      if (!s.empty()) out.emplace_back(s);
      start = i + 1;
    }
  }
  auto tail = trim(text.substr(std::min(start, text.size())));
  if (!tail.empty()) out.emplace_back(tail);
  return out;
}

std::vector<Chunk> chunk_document(const Document& doc, std::size_t max_chars) {
  if (max_chars == 0) throw ValidationError("chunk_document: max_chars must be positive");
  std::vector<Chunk> chunks;
  for (std::size_t u = 0; u < doc.sections.size(); ++u) {
    const auto& unit = doc.sections[u];
    if (is_blank(unit)) continue;
    const std::string base = doc.doc_id + ":" + std::to_string(u);
    auto text = trim(unit);
    if (text.size() <= max_chars) {
      chunks.push_back(make_chunk(doc.doc_id, base, std::string(text)));
      continue;
    }
    auto pieces = split_unit(text, max_chars);
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      chunks.push_back(make_chunk(doc.doc_id, base + "." + std::to_string(p), std::move(pieces[p])));
    }
  }
  return chunks;
}

std::vector<Chunk> chunk_corpus(const std::vector<Document>& docs, std::size_t max_chars) {
  std::vector<Chunk> all;
  for (const auto& d : docs) {
    auto chunks = chunk_document(d, max_chars);
    std::move(chunks.begin(), chunks.end(), std::back_inserter(all));
  }
  return all;
}

InvertedIndex::InvertedIndex(std::vector<Chunk> chunks) : chunks_(std::move(chunks)) {
  if (chunks_.size() > std::numeric_limits<ChunkOrdinal>::max()) {
    throw ValidationError("index: too many chunks");
  }
  for (std::size_t i = 0; i < chunks_.size(); ++i) {
    for (const auto& term : chunks_[i].stemmed_terms) postings_[term].push_back(static_cast<ChunkOrdinal>(i));
  }
}

std::span<const ChunkOrdinal> InvertedIndex::postings(const std::string& stemmed_term) const {
  auto it = postings_.find(stemmed_term);
  if (it == postings_.end()) return {};
  return it->second;
}

std::vector<ChunkOrdinal> InvertedIndex::conjunctive(const std::vector<std::string>& stemmed_terms) const {
  if (stemmed_terms.empty()) return {};
  std::vector<std::span<const ChunkOrdinal>> lists;
  lists.reserve(stemmed_terms.size());
  for (const auto& t : stemmed_terms) {
    auto p = postings(t);
    if (p.empty()) return {};
    lists.push_back(p);
  }
  std::sort(lists.begin(), lists.end(), [](auto a, auto b) { return a.size() < b.size(); });
  std::vector<ChunkOrdinal> result(lists.front().begin(), lists.front().end());
  std::vector<ChunkOrdinal> next;
  for (std::size_t i = 1; i < lists.size() && !result.empty(); ++i) {
    next.clear();
    std::set_intersection(result.begin(), result.end(), lists[i].begin(), lists[i].end(), std::back_inserter(next));
    result.swap(next);
  }
  return result;
}

InvertedIndex build_index(std::vector<Chunk> chunks) { return InvertedIndex(std::move(chunks)); }

std::vector<bool> PredicateFilter::decide(std::span<const FilterQuery> queries) const {
  std::vector<bool> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(pred_(q));
  return out;
}

std::vector<std::string> query_terms(const std::vector<std::string>& keywords, std::string_view answer) {
  std::vector<std::string> terms;
  for (const auto& k : keywords) {
    auto t = text::stemmed_tokens(k);
    terms.insert(terms.end(), t.begin(), t.end());
  }
  auto a = text::stemmed_tokens(answer);
  terms.insert(terms.end(), a.begin(), a.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

namespace {

struct Retrieval {
  std::vector<ChunkOrdinal> kept;  // first `cap` matches
  std::int64_t raw = 0;
};

Retrieval retrieve(const InvertedIndex& index, const std::vector<std::string>& keywords, std::string_view answer,
                   std::int64_t cap) {
  if (cap < 0) throw ValidationError("cooccurrence: cap must be non-negative");
  Retrieval r;
  // An answer without any indexable token cannot be matched.
  if (text::stemmed_tokens(answer).empty()) return r;
  r.kept = index.conjunctive(query_terms(keywords, answer));
  r.raw = static_cast<std::int64_t>(r.kept.size());
  if (r.raw > cap) r.kept.resize(static_cast<std::size_t>(cap));
  return r;
}

}  // namespace

CountResult cooccurrence_count(const InvertedIndex& index, const std::vector<std::string>& keywords,
                               std::string_view answer, std::int64_t cap, const EntailmentFilter* filter,
                               std::string_view question, std::string_view question_id) {
  auto r = retrieve(index, keywords, answer, cap);
  CountResult out{static_cast<std::int64_t>(r.kept.size()), r.raw};
  if (filter && !r.kept.empty()) {
    std::vector<FilterQuery> queries;
    queries.reserve(r.kept.size());
    for (auto ord : r.kept) {
      const auto& c = index.chunks()[ord];
      queries.push_back({question_id, question, answer, c.chunk_id, c.text});
    }
    auto flags = filter->decide(queries);
    out.count = std::count(flags.begin(), flags.end(), true);
  }
  return out;
}

std::vector<GroundTruthRecord> build_ground_truth(const InvertedIndex& index, const std::vector<QuestionSpec>& specs,
                                                  const BuildOptions& options, const EntailmentFilter* filter) {
  const std::size_t n = specs.size();
  std::vector<std::vector<Retrieval>> retrieved(n);
  std::vector<std::string> problems(n);

  const std::size_t n_blocks = (n + 63) / 64;
  parallel_blocks(n_blocks, options.workers, [&](std::size_t block) {
    for (std::size_t i = block * 64; i < std::min(n, (block + 1) * 64); ++i) {
      const auto& spec = specs[i];
      if (spec.keywords.empty()) problems[i] = "invalid spec: no keywords";
      if (spec.answers.empty()) problems[i] = "invalid spec: no answers";
      if (!problems[i].empty()) continue;
      retrieved[i].reserve(spec.answers.size());
      for (const auto& a : spec.answers) retrieved[i].push_back(retrieve(index, spec.keywords, a, options.cap));
    }
  });

  // Filter decisions are requested in one batch, in spec/answer/chunk order.
  std::vector<std::vector<std::int64_t>> counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& r : retrieved[i]) counts[i].push_back(static_cast<std::int64_t>(r.kept.size()));
  }
  if (filter) {
    std::vector<FilterQuery> queries;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < retrieved[i].size(); ++a) {
        for (auto ord : retrieved[i][a].kept) {
          const auto& c = index.chunks()[ord];
          queries.push_back({specs[i].question_id, specs[i].question, specs[i].answers[a], c.chunk_id, c.text});
        }
      }
    }
    const auto flags = queries.empty() ? std::vector<bool>{} : filter->decide(queries);
    if (flags.size() != queries.size()) {
      throw ValidationError("entailment filter returned " + std::to_string(flags.size()) + " decisions for " +
                            std::to_string(queries.size()) + " queries");
    }
    std::size_t q = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < retrieved[i].size(); ++a) {
        std::int64_t accepted = 0;
        for (std::size_t c = 0; c < retrieved[i][a].kept.size(); ++c) accepted += flags[q++] ? 1 : 0;
        counts[i][a] = accepted;
      }
    }
  }

  std::vector<GroundTruthRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& spec = specs[i];
    GroundTruthRecord rec;
    rec.question_id = spec.question_id;
    rec.question = spec.question;
    rec.answers = spec.answers;
    rec.counts = counts[i];
    for (const auto& r : retrieved[i]) rec.raw_matches.push_back(r.raw);
    if (!problems[i].empty()) {
      rec.discarded = true;
      rec.discard_reason = problems[i];
    } else if (auto zero = std::find(rec.counts.begin(), rec.counts.end(), 0); zero != rec.counts.end()) {
      rec.discarded = true;
      rec.discard_reason = "zero count for answer '" + rec.answers[zero - rec.counts.begin()] + "'";
    } else {
      std::vector<double> c(rec.counts.begin(), rec.counts.end());
      std::vector<std::string> classes;
      // Duplicate answers would violate class uniqueness; suffix them.
      std::map<std::string, int> seen;
      for (const auto& a : rec.answers) {
        int k = seen[a]++;
        classes.push_back(k == 0 ? a : a + "#" + std::to_string(k));
      }
      rec.p_star = normalize(c, std::move(classes));
    }
    records.push_back(std::move(rec));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const GroundTruthRecord& x, const GroundTruthRecord& y) { return x.question_id < y.question_id; });
  return records;
}

std::string answer_key(std::string_view answer) {
  std::string key;
  for (const auto& t : text::stemmed_tokens(answer)) {
    if (!key.empty()) key.push_back(' ');
    key += t;
  }
  return key;
}

std::vector<JsResult> cross_validate(const std::vector<GroundTruthRecord>& a, const std::vector<GroundTruthRecord>& b) {
  std::map<std::string, const GroundTruthRecord*> right;
  for (const auto& r : b) {
    if (!r.discarded && r.p_star) right.emplace(r.question_id, &r);
  }
  std::map<std::string, JsResult> out;
  for (const auto& l : a) {
    if (l.discarded || !l.p_star) continue;
    auto it = right.find(l.question_id);
    if (it == right.end() || out.contains(l.question_id)) continue;
    const auto& r = *it->second;

    std::vector<std::string> order;
    std::map<std::string, std::pair<double, double>> mass;
    auto add = [&](const GroundTruthRecord& rec, bool left) {
      for (std::size_t i = 0; i < rec.answers.size(); ++i) {
        auto key = answer_key(rec.answers[i]);
        auto [pos, inserted] = mass.try_emplace(key, 0.0, 0.0);
        if (inserted) order.push_back(key);
        (left ? pos->second.first : pos->second.second) += (*rec.p_star)[i];
      }
    };
    add(l, true);
    add(r, false);
    std::vector<double> p;
    std::vector<double> q;
    for (const auto& key : order) {
      p.push_back(mass[key].first);
      q.push_back(mass[key].second);
    }
    out.emplace(l.question_id, JsResult{l.question_id, kernel::js_divergence(p, q)});
  }
  if (out.empty()) throw DegenerateInputError("cross_validate: no question present and kept in both datasets");
  std::vector<JsResult> results;
  results.reserve(out.size());
  for (auto& [id, res] : out) results.push_back(std::move(res));
  return results;
}

}  // namespace auq::corpus
