#pragma once

// Ground-truth answer distributions from corpus co-occurrence counts.
//
// Documents are split into chunks (one per paragraph or list item, with
// oversized units split at sentence boundaries), indexed over Porter stems,
// and each candidate answer is counted as the number of chunks that contain
// every stem of every keyword and of the answer.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "auq/categorical.hpp"

namespace auq::corpus {

inline constexpr std::size_t kMaxChunkChars = 2000;
inline constexpr std::int64_t kDefaultCap = 1000;

struct Document {
  std::string doc_id;
  std::vector<std::string> sections;  // lowest-level text units
};

struct Chunk {
  std::string doc_id;
  std::string chunk_id;
  std::string text;
  std::vector<std::string> stemmed_terms;  // sorted, unique
};

/// Splits text into sentences after '.', '!' or '?' followed by whitespace.
std::vector<std::string> split_sentences(std::string_view text);

/// One chunk per non-blank unit; units longer than max_chars are packed
/// sentence by sentence into pieces of at most max_chars. A single sentence
/// longer than max_chars falls back to word boundaries, then to a hard cut.
std::vector<Chunk> chunk_document(const Document& doc, std::size_t max_chars = kMaxChunkChars);
std::vector<Chunk> chunk_corpus(const std::vector<Document>& docs, std::size_t max_chars = kMaxChunkChars);

using ChunkOrdinal = std::uint32_t;

class InvertedIndex {
 public:
  InvertedIndex() = default;
  explicit InvertedIndex(std::vector<Chunk> chunks);

  /// Sorted chunk ordinals containing the stemmed term; empty when absent.
  std::span<const ChunkOrdinal> postings(const std::string& stemmed_term) const;
  const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
  std::size_t term_count() const noexcept { return postings_.size(); }

  /// Ordinals of chunks containing all terms, ascending.
  std::vector<ChunkOrdinal> conjunctive(const std::vector<std::string>& stemmed_terms) const;

 private:
  std::vector<Chunk> chunks_;
  std::unordered_map<std::string, std::vector<ChunkOrdinal>> postings_;
};

InvertedIndex build_index(std::vector<Chunk> chunks);

struct QuestionSpec {
  std::string question_id;
  std::string question;
  std::vector<std::string> keywords;  // main keyword first
  std::vector<std::string> answers;
};

struct FilterQuery {
  std::string_view question_id;
  std::string_view question;
  std::string_view answer;
  std::string_view chunk_id;
  std::string_view chunk_text;
};

/// Entailment check applied to retrieved chunks after capping. decide() sees
/// every query of a ground-truth build at once and returns one flag each.
class EntailmentFilter {
 public:
  virtual ~EntailmentFilter() = default;
  virtual std::vector<bool> decide(std::span<const FilterQuery> queries) const = 0;
};

/// Adapts a per-chunk predicate.
class PredicateFilter final : public EntailmentFilter {
 public:
  explicit PredicateFilter(std::function<bool(const FilterQuery&)> pred) : pred_(std::move(pred)) {}
  std::vector<bool> decide(std::span<const FilterQuery> queries) const override;

 private:
  std::function<bool(const FilterQuery&)> pred_;
};

struct CountResult {
  std::int64_t count = 0;        // after cap and filter
  std::int64_t raw_matches = 0;  // before cap
};

/// Stems of every keyword phrase plus the answer, deduplicated.
std::vector<std::string> query_terms(const std::vector<std::string>& keywords, std::string_view answer);

/// Chunks containing all keyword stems and all answer stems, truncated to the
/// first `cap` in chunk order, then passed through the filter if one is given.
CountResult cooccurrence_count(const InvertedIndex& index, const std::vector<std::string>& keywords,
                               std::string_view answer, std::int64_t cap = kDefaultCap,
                               const EntailmentFilter* filter = nullptr, std::string_view question = {},
                               std::string_view question_id = {});

struct GroundTruthRecord {
  std::string question_id;
  std::string question;
  std::vector<std::string> answers;
  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> raw_matches;
  std::optional<Categorical> p_star;  // set iff not discarded
  bool discarded = false;
  std::string discard_reason;
};

struct BuildOptions {
  std::int64_t cap = kDefaultCap;
  std::size_t workers = 1;
};

/// Counts every (spec, answer) pair. Specs with any zero count are kept but
/// marked discarded. Output is sorted by question_id (stable) and does not
/// depend on the worker count.
std::vector<GroundTruthRecord> build_ground_truth(const InvertedIndex& index, const std::vector<QuestionSpec>& specs,
                                                  const BuildOptions& options = {},
                                                  const EntailmentFilter* filter = nullptr);

struct JsResult {
  std::string question_id;
  double js = 0.0;
};

/// Stemmed canonical form used to match answers across datasets.
std::string answer_key(std::string_view answer);

/// Per shared, non-discarded question: JS divergence between the two ground
/// truths over the union of answers (matched by answer_key). Ordered by
/// question_id. Throws DegenerateInputError when nothing is shared.
std::vector<JsResult> cross_validate(const std::vector<GroundTruthRecord>& a, const std::vector<GroundTruthRecord>& b);

}  // namespace auq::corpus
