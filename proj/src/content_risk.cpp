#include "privrisk/content_risk.hpp"

#include <algorithm>
#include <fstream>

namespace privrisk {

namespace {

constexpr const char* kMonth =
    "(?:jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|aug(?:ust)?|"
    "sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|dec(?:ember)?)";

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
}

bool is_token_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

bool is_gap_byte(char c) { return c == ' ' || c == '-' || c == '\'' || c == '.' || c == '\t'; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

struct Token {
  std::size_t start;
  std::size_t end;
  std::string lower;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_token_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    tokens.push_back({start, i, ascii_lower(text.substr(start, i - start))});
  }
  return tokens;
}

bool joinable(std::string_view text, const Token& a, const Token& b) {
  if (b.start - a.end > 2) return false;
  for (std::size_t k = a.end; k < b.start; ++k)
    if (!is_gap_byte(text[k])) return false;
  return true;
}

struct Candidate {
  std::size_t start;
  std::size_t end;
  int priority;
  std::string_view type;
};

}  // namespace

RuleExtractorConfig RuleExtractorConfig::default_patterns() {
  RuleExtractorConfig config;
  const std::string month = kMonth;
  config.patterns = {
      {"EMAIL", R"([a-z0-9._%+-]+@[a-z0-9-]+(?:\.[a-z0-9-]+)*\.[a-z]{2,})"},
      {"PHONE", R"((?:\+\d{1,3}[ .-]?)?(?:\(\d{3}\)|\d{3})[ .-]?\d{3}[ .-]?\d{4})"},
      {"DATE", month + R"(\.?\s+\d{1,2}(?:st|nd|rd|th)?(?:,?\s+\d{4})?)"},
      {"DATE", R"(\d{1,2}(?:st|nd|rd|th)?\s+(?:of\s+)?)" + month + R"((?:,?\s+\d{4})?)"},
      {"DATE", R"(\d{4}-\d{2}-\d{2}|\d{1,2}/\d{1,2}/\d{2,4})"},
      {"DATE", R"((?:19|20)\d{2}|yesterday|today|tomorrow|monday|tuesday|wednesday|thursday|friday|saturday|sunday)"},
      {"TIME", R"(\d{1,2}:\d{2}(?::\d{2})?(?:\s?[ap]\.?m\.?)?|\d{1,2}\s?[ap]\.?m\.?|noon|midnight)"},
      {"MONEY", R"((?:\$|€|£|₹)\s?\d[\d,]*(?:\.\d+)?(?:\s?(?:million|billion|k))?|\d[\d,]*(?:\.\d+)?\s?(?:dollars|euros|pounds sterling|rupees|usd|eur|inr))"},
      {"PERCENT", R"(\d+(?:\.\d+)?\s?(?:%|percent))"},
      {"QUANTITY", R"(\d+(?:\.\d+)?\s?(?:kg|km|kilometers|miles?|lbs|meters?|feet|ft|liters?|litres?|grams?|cm|mm|acres?))"},
      {"ORDINAL", R"(\d+(?:st|nd|rd|th)|first|second|third|fourth|fifth|sixth|seventh|eighth|ninth|tenth)"},
      {"CARDINAL", R"(\d+(?:[,.]\d+)*|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve|hundred|thousand|million|billion)"},
  };
  return config;
}

RuleExtractorConfig RuleExtractorConfig::from_directory(const std::filesystem::path& dir) {
  RuleExtractorConfig config = default_patterns();
  config.gazetteer_order = {"PERSON", "GPE", "LOC", "ORG", "NORP", "EVENT",
                            "FAC", "PRODUCT", "LAW", "LANGUAGE", "WORK_OF_ART"};
  for (const auto& type : config.gazetteer_order) {
    std::ifstream in(dir / (type + ".txt"));
    if (!in) continue;
    auto& terms = config.gazetteers[type];
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      const auto first = line.find_first_not_of(' ');
      if (first == std::string::npos || line[first] == '#') continue;
      terms.push_back(line.substr(first));
    }
  }
  return config;
}

RuleExtractor::RuleExtractor(const RuleExtractorConfig& config) {
  int priority = 0;
  for (const auto& [type, pattern] : config.patterns)
    patterns_.push_back(
        {type, std::regex(pattern, std::regex::ECMAScript | std::regex::icase), priority++});

  for (const auto& type : config.gazetteer_order) {
    auto it = config.gazetteers.find(type);
    if (it == config.gazetteers.end()) continue;
    const int type_index = static_cast<int>(gazetteer_types_.size());
    gazetteer_types_.push_back(type);
    for (const auto& term : it->second) {
      const auto tokens = tokenize(term);
      if (tokens.empty()) continue;
      TrieNode* node = &trie_;
      for (const auto& tok : tokens) {
        auto& child = node->children[tok.lower];
        if (!child) child = std::make_unique<TrieNode>();
        node = child.get();
      }
      if (node->type_index < 0) node->type_index = type_index;
    }
  }
}

std::vector<std::string> RuleExtractor::entity_types() const {
  std::vector<std::string> types;
  for (const auto& p : patterns_) types.push_back(p.type);
  types.insert(types.end(), gazetteer_types_.begin(), gazetteer_types_.end());
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  return types;
}

std::vector<SensitiveEntity> RuleExtractor::extract(std::string_view text) const {
  std::vector<Candidate> candidates;
  const auto bounded = [&](std::size_t start, std::size_t end) {
    const bool left_ok = start == 0 || !is_word_byte(static_cast<unsigned char>(text[start - 1])) ||
                         !is_word_byte(static_cast<unsigned char>(text[start]));
    const bool right_ok = end == text.size() ||
                          !is_word_byte(static_cast<unsigned char>(text[end])) ||
                          !is_word_byte(static_cast<unsigned char>(text[end - 1]));
    return left_ok && right_ok;
  };

  for (const auto& pattern : patterns_) {
    using Iter = std::regex_iterator<const char*>;
    for (Iter it(text.data(), text.data() + text.size(), pattern.regex), last; it != last;
         ++it) {
      const auto start = static_cast<std::size_t>(it->position());
      const auto end = start + static_cast<std::size_t>(it->length());
      if (end > start && bounded(start, end))
        candidates.push_back({start, end, pattern.priority, pattern.type});
    }
  }

  const int gazetteer_base = static_cast<int>(patterns_.size());
  const auto tokens = tokenize(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const TrieNode* node = &trie_;
    int best_type = -1;
    std::size_t best_end = 0;
    for (std::size_t j = i; j < tokens.size(); ++j) {
      if (j > i && !joinable(text, tokens[j - 1], tokens[j])) break;
      auto child = node->children.find(tokens[j].lower);
      if (child == node->children.end()) break;
      node = child->second.get();
      if (node->type_index >= 0) {
        best_type = node->type_index;
        best_end = tokens[j].end;
      }
    }
    if (best_type >= 0)
      candidates.push_back({tokens[i].start, best_end, gazetteer_base + best_type,
                            gazetteer_types_[static_cast<std::size_t>(best_type)]});
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    const auto la = a.end - a.start;
    const auto lb = b.end - b.start;
    if (la != lb) return la > lb;
    if (a.start != b.start) return a.start < b.start;
    return a.priority < b.priority;
  });

  std::vector<bool> taken(text.size(), false);
  std::vector<SensitiveEntity> out;
  for (const auto& c : candidates) {
    if (std::any_of(taken.begin() + static_cast<std::ptrdiff_t>(c.start),
                    taken.begin() + static_cast<std::ptrdiff_t>(c.end), [](bool t) { return t; }))
      continue;
    std::fill(taken.begin() + static_cast<std::ptrdiff_t>(c.start),
              taken.begin() + static_cast<std::ptrdiff_t>(c.end), true);
    out.push_back({std::string(c.type), c.start, c.end,
                   std::string(text.substr(c.start, c.end - c.start))});
  }
  std::sort(out.begin(), out.end(),
            [](const SensitiveEntity& a, const SensitiveEntity& b) { return a.start < b.start; });
  return out;
}

const RuleExtractor& default_extractor() {
  static const RuleExtractor extractor(
      RuleExtractorConfig::from_directory(std::filesystem::path(PRIVRISK_DATA_DIR) / "gazetteers"));
  return extractor;
}

// ---------------------------------------------------------------------------

double post_sensitivity(std::span<const SensitiveEntity> entities, const SensitivityTable& table) {
  double total = 0.0;
  for (const auto& e : entities) total += table.at(e.entity_type);
  return total;
}

double post_risk(double sensitivity, double visibility) {
  if (sensitivity < 0.0 || visibility < 0.0)
    throw PreconditionError("sensitivity and visibility must be non-negative");
  return sensitivity * visibility;
}

PostAnalysis analyze_post(const Post& post, const EntityExtractor& extractor) {
  PostAnalysis analysis;
  analysis.text_entities = extractor.extract(post.text);
  analysis.comment_entities.reserve(post.comments.size());
  for (const auto& c : post.comments) analysis.comment_entities.push_back(extractor.extract(c.text));
  return analysis;
}

PostRisk score_post(const Post& post, const PostAnalysis& analysis, const SensitivityTable& table,
                    double post_visibility) {
  PostRisk risk;
  risk.post_id = post.id;
  risk.visibility = post_visibility;
  risk.sensitivity = post_sensitivity(analysis.text_entities, table);
  risk.risk = post_risk(risk.sensitivity, post_visibility);
  for (std::size_t k = 0; k < post.comments.size(); ++k) {
    CommentRisk c;
    c.comment_id = post.comments[k].id;
    c.author = post.comments[k].author;
    c.sensitivity = post_sensitivity(analysis.comment_entities[k], table);
    c.risk = post_risk(c.sensitivity, post_visibility);
    risk.comments.total += c.risk;
    risk.comments.comments.push_back(std::move(c));
  }
  risk.total = risk.risk + risk.comments.total;
  return risk;
}

CommentRisks comment_risks(const Post& post, const SensitivityTable& table,
                           const EntityExtractor& extractor, double post_visibility) {
  CommentRisks out;
  for (const auto& comment : post.comments) {
    const double s = post_sensitivity(extractor.extract(comment.text), table);
    const double r = post_risk(s, post_visibility);
    out.comments.push_back({comment.id, comment.author, s, r});
    out.total += r;
  }
  return out;
}

double post_total_risk(const Post& post, const SensitivityTable& table,
                       const EntityExtractor& extractor, double post_visibility) {
  return score_post(post, analyze_post(post, extractor), table, post_visibility).total;
}

}  // namespace privrisk
