#include "courtrel/relext.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>

#include "courtrel/builtin_data.hpp"
#include "courtrel/errors.hpp"
#include "courtrel/util.hpp"

namespace courtrel {

std::string_view to_string(RelationType r) {
  switch (r) {
    case RelationType::IsA: return "IsA";
    case RelationType::PartOf: return "PartOf";
    case RelationType::UsedBy: return "UsedBy";
    case RelationType::UsedFor: return "UsedFor";
    case RelationType::UsedIn: return "UsedIn";
    case RelationType::UsedOver: return "UsedOver";
    case RelationType::UsedWith: return "UsedWith";
  }
  return "IsA";
}

std::optional<RelationType> relation_from_string(std::string_view name) {
  for (RelationType r : kAllRelations) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

namespace {

constexpr int kMaxGap = 10;
constexpr int kCoordinationBudget = 5;

struct RawElement {
  PatternElement element;
  bool optional = false;
};

// Splits a pattern body into whitespace-separated element strings, keeping
// quoted literals intact.
std::vector<std::pair<std::string, std::size_t>> split_elements(
    std::string_view body, std::size_t line_no, std::size_t offset) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < body.size()) {
    if (is_ascii_space(body[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    bool in_quotes = false;
    while (i < body.size() && (in_quotes || !is_ascii_space(body[i]))) {
      if (body[i] == '"') in_quotes = !in_quotes;
      ++i;
    }
    if (in_quotes) {
      throw PatternSyntax(line_no, offset + begin + 1, "unterminated literal");
    }
    out.emplace_back(std::string(body.substr(begin, i - begin)), offset + begin + 1);
  }
  return out;
}

RawElement parse_element(std::string text, std::size_t line_no, std::size_t col) {
  RawElement raw;
  if (text.size() > 1 && text.back() == '?') {
    raw.optional = true;
    text.pop_back();
  }
  PatternElement& el = raw.element;
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    el.kind = PatternElement::Kind::Literal;
    el.literal = to_lower(std::string_view(text).substr(1, text.size() - 2));
    if (el.literal.empty()) throw PatternSyntax(line_no, col, "empty literal");
    return raw;
  }
  if (text == "NP(L)" || text == "NP(l)") {
    el.kind = PatternElement::Kind::SlotLeft;
    if (raw.optional) throw PatternSyntax(line_no, col, "noun-phrase slots cannot be optional");
    return raw;
  }
  if (text == "NP(R)" || text == "NP(r)") {
    el.kind = PatternElement::Kind::SlotRight;
    if (raw.optional) throw PatternSyntax(line_no, col, "noun-phrase slots cannot be optional");
    return raw;
  }
  if (text.starts_with("TAG(") && text.ends_with(")")) {
    auto name = text.substr(4, text.size() - 5);
    auto tag = tag_from_string(name);
    if (!tag) throw PatternSyntax(line_no, col, "unknown tag \"" + name + "\"");
    el.kind = PatternElement::Kind::Tag;
    el.tag = *tag;
    return raw;
  }
  if (text == "GAP" || (text.starts_with("GAP(") && text.ends_with(")"))) {
    el.kind = PatternElement::Kind::Gap;
    el.max_gap = 5;
    if (text != "GAP") {
      auto digits = text.substr(4, text.size() - 5);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw PatternSyntax(line_no, col, "GAP expects a number of items");
      }
      el.max_gap = std::stoi(digits);
    }
    if (el.max_gap < 0 || el.max_gap > kMaxGap) {
      throw PatternSyntax(line_no, col, "GAP bound must be 0.." + std::to_string(kMaxGap));
    }
    if (raw.optional) throw PatternSyntax(line_no, col, "GAP cannot take '?'");
    return raw;
  }
  throw PatternSyntax(line_no, col, "unrecognized element \"" + text + "\"");
}

// Strips a trailing comment (a '#' outside quotes).
std::string_view strip_comment(std::string_view line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quotes = !in_quotes;
    else if (line[i] == '#' && !in_quotes) return line.substr(0, i);
  }
  return line;
}

}  // namespace

PatternPack compile_patterns(std::string_view text) {
  PatternPack pack;
  std::set<std::string> seen_ids;
  std::map<std::string, int> auto_counters;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++line_no;
    std::size_t next = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    pos = next;

    line = strip_comment(line);
    auto stripped = trim(line);
    if (stripped.empty()) {
      if (nl == std::string_view::npos) break;
      continue;
    }

    std::size_t colon = stripped.find(':');
    if (colon == std::string_view::npos) {
      throw PatternSyntax(line_no, 1, "expected 'Relation : elements'");
    }
    auto head = trim(stripped.substr(0, colon));
    std::string id;
    std::string_view rel_name = head;
    if (auto open = head.find('('); open != std::string_view::npos) {
      if (head.back() != ')') throw PatternSyntax(line_no, open + 1, "unclosed pattern id");
      id = std::string(trim(head.substr(open + 1, head.size() - open - 2)));
      rel_name = trim(head.substr(0, open));
      if (id.empty()) throw PatternSyntax(line_no, open + 1, "empty pattern id");
    }
    auto relation = relation_from_string(rel_name);
    if (!relation) {
      throw PatternSyntax(line_no, 1, "unknown relation \"" + std::string(rel_name) + "\"");
    }
    if (id.empty()) {
      int& counter = auto_counters[to_lower(rel_name)];
      id = to_lower(rel_name) + "_" + std::to_string(++counter);
    }
    if (!seen_ids.insert(id).second) throw DuplicateId(id);

    std::vector<RawElement> raws;
    for (auto& [elem_text, col] :
         split_elements(stripped.substr(colon + 1), line_no, colon + 1)) {
      raws.push_back(parse_element(std::move(elem_text), line_no, col));
    }

    int left_slots = 0;
    int right_slots = 0;
    for (const auto& raw : raws) {
      if (raw.element.kind == PatternElement::Kind::SlotLeft) ++left_slots;
      if (raw.element.kind == PatternElement::Kind::SlotRight) ++right_slots;
    }
    if (left_slots != 1) throw MissingSlot(line_no, "left");
    if (right_slots != 1) throw MissingSlot(line_no, "right");

    SurfacePattern pattern;
    pattern.id = id;
    pattern.relation = *relation;
    pattern.priority = static_cast<int>(pack.patterns.size());

    // Expand optional elements into concrete variants, include-first.
    std::vector<std::size_t> optional_indices;
    for (std::size_t i = 0; i < raws.size(); ++i) {
      if (raws[i].optional) optional_indices.push_back(i);
    }
    std::size_t combos = std::size_t{1} << optional_indices.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      std::vector<PatternElement> variant;
      for (std::size_t i = 0, opt = 0; i < raws.size(); ++i) {
        if (raws[i].optional) {
          bool drop = (mask >> opt) & 1;
          ++opt;
          if (drop) continue;
        }
        variant.push_back(raws[i].element);
      }
      pattern.variants.push_back(std::move(variant));
    }
    pack.patterns.push_back(std::move(pattern));
  }
  return pack;
}

PatternPack load_patterns(const std::filesystem::path& path) {
  return compile_patterns(read_file(path));
}

std::string_view PatternPack::builtin_text() { return builtin::patterns_text(); }

const PatternPack& PatternPack::builtin() {
  static const PatternPack pack = compile_patterns(builtin_text());
  return pack;
}

namespace {

// A sentence as the matcher sees it: noun phrases are opaque single items,
// the remaining tokens are free items.
struct Item {
  bool is_chunk = false;
  const NounPhrase* chunk = nullptr;
  const TaggedToken* token = nullptr;
};

bool is_sentence_final_punct(const Item& item) {
  if (item.is_chunk) return false;
  const std::string& s = item.token->surface;
  return s == "." || s == "!" || s == "?";
}

std::vector<Item> build_items(const AnalyzedSentence& sentence) {
  std::vector<Item> items;
  std::size_t next_chunk = 0;
  for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
    if (next_chunk < sentence.chunks.size() &&
        sentence.chunks[next_chunk].first_token == t) {
      items.push_back({true, &sentence.chunks[next_chunk], nullptr});
      t = sentence.chunks[next_chunk].last_token;
      ++next_chunk;
    } else {
      items.push_back({false, nullptr, &sentence.tokens[t]});
    }
  }
  return items;
}

struct Match {
  const NounPhrase* left = nullptr;
  const NounPhrase* right = nullptr;
  std::size_t right_item = 0;  // item index of the right slot, for coordination
};

void match_at(const std::vector<PatternElement>& elements, const std::vector<Item>& items,
              std::size_t el_idx, std::size_t item_idx, Match current,
              std::vector<Match>& out) {
  if (el_idx == elements.size()) {
    out.push_back(current);
    return;
  }
  const PatternElement& el = elements[el_idx];
  switch (el.kind) {
    case PatternElement::Kind::Literal: {
      if (item_idx >= items.size() || items[item_idx].is_chunk) return;
      if (to_lower(items[item_idx].token->surface) != el.literal) return;
      match_at(elements, items, el_idx + 1, item_idx + 1, current, out);
      return;
    }
    case PatternElement::Kind::Tag: {
      if (item_idx >= items.size() || items[item_idx].is_chunk) return;
      if (items[item_idx].token->tag != el.tag) return;
      match_at(elements, items, el_idx + 1, item_idx + 1, current, out);
      return;
    }
    case PatternElement::Kind::SlotLeft:
    case PatternElement::Kind::SlotRight: {
      if (item_idx >= items.size() || !items[item_idx].is_chunk) return;
      Match next = current;
      if (el.kind == PatternElement::Kind::SlotLeft) {
        next.left = items[item_idx].chunk;
      } else {
        next.right = items[item_idx].chunk;
        next.right_item = item_idx;
      }
      match_at(elements, items, el_idx + 1, item_idx + 1, next, out);
      return;
    }
    case PatternElement::Kind::Gap: {
      for (int g = 0; g <= el.max_gap; ++g) {
        std::size_t skip_to = item_idx + static_cast<std::size_t>(g);
        if (skip_to > items.size()) break;
        bool blocked = false;
        for (std::size_t k = item_idx; k < skip_to; ++k) {
          if (is_sentence_final_punct(items[k])) {
            blocked = true;
            break;
          }
        }
        if (blocked) break;
        match_at(elements, items, el_idx + 1, skip_to, current, out);
      }
      return;
    }
  }
}

bool is_coordinator(const Item& item) {
  if (item.is_chunk) return false;
  std::string lower = to_lower(item.token->surface);
  return lower == "and" || lower == "or" || lower == ",";
}

// Conjuncts of the right slot: ","/"and"/"or" (optionally ", and") followed by
// another noun phrase within the coordination budget.
std::vector<std::pair<const NounPhrase*, std::size_t>> coordination_conjuncts(
    const std::vector<Item>& items, std::size_t right_item) {
  std::vector<std::pair<const NounPhrase*, std::size_t>> conjuncts;
  std::size_t pos = right_item;
  while (true) {
    std::size_t i = pos + 1;
    if (i >= items.size() || !is_coordinator(items[i])) break;
    ++i;
    if (i < items.size() && !items[i - 1].is_chunk &&
        to_lower(items[i - 1].token->surface) == "," && is_coordinator(items[i])) {
      ++i;  // ", and" / ", or"
    }
    const NounPhrase* found = nullptr;
    std::size_t found_at = 0;
    for (int budget = 0; budget <= kCoordinationBudget && i < items.size(); ++i) {
      if (items[i].is_chunk) {
        found = items[i].chunk;
        found_at = i;
        break;
      }
      if (is_sentence_final_punct(items[i])) break;
      ++budget;
    }
    if (!found) break;
    conjuncts.emplace_back(found, found_at);
    pos = found_at;
  }
  return conjuncts;
}

}  // namespace

std::vector<RelationInstance> extract(const AnalyzedSentence& sentence,
                                      const PatternPack& pack) {
  std::vector<Item> items = build_items(sentence);
  if (items.empty()) return {};

  struct Best {
    int priority;
    std::string pattern_id;
  };
  std::map<std::tuple<RelationType, std::string, std::string>, Best> merged;

  auto record = [&](RelationType relation, const std::string& left,
                    const std::string& right, int priority, const std::string& id) {
    if (left == right) return;
    auto key = std::make_tuple(relation, left, right);
    auto it = merged.find(key);
    if (it == merged.end() || priority < it->second.priority) {
      merged[key] = {priority, id};
    }
  };

  for (const SurfacePattern& pattern : pack.patterns) {
    for (const auto& variant : pattern.variants) {
      std::vector<Match> matches;
      for (std::size_t start = 0; start < items.size(); ++start) {
        match_at(variant, items, 0, start, {}, matches);
      }
      for (const Match& m : matches) {
        if (!m.left || !m.right) continue;
        record(pattern.relation, m.left->canonical, m.right->canonical,
               pattern.priority, pattern.id);
        for (auto& [conjunct, at] : coordination_conjuncts(items, m.right_item)) {
          record(pattern.relation, m.left->canonical, conjunct->canonical,
                 pattern.priority, pattern.id);
        }
      }
    }
  }

  std::vector<RelationInstance> out;
  out.reserve(merged.size());
  for (const auto& [key, best] : merged) {
    RelationInstance inst;
    inst.relation = std::get<0>(key);
    inst.left = std::get<1>(key);
    inst.right = std::get<2>(key);
    inst.pattern_id = best.pattern_id;
    out.push_back(std::move(inst));
  }
  std::sort(out.begin(), out.end(), [&](const RelationInstance& a, const RelationInstance& b) {
    auto pa = merged.at({a.relation, a.left, a.right}).priority;
    auto pb = merged.at({b.relation, b.left, b.right}).priority;
    if (pa != pb) return pa < pb;
    return std::tie(a.relation, a.left, a.right) < std::tie(b.relation, b.left, b.right);
  });
  return out;
}

namespace {

std::vector<RelationInstance> extract_utterance(const Utterance& u,
                                                const PatternPack& pack,
                                                const Tagger& tagger) {
  std::vector<RelationInstance> out;
  auto analyzed = analyze_utterance(u, tagger);
  for (std::size_t s = 0; s < analyzed.size(); ++s) {
    for (RelationInstance inst : extract(analyzed[s], pack)) {
      inst.case_id = u.case_id;
      inst.utterance_index = u.index;
      inst.sentence_index = static_cast<int>(s);
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace

void extract_stream(const Corpus& corpus, const std::vector<UttRef>& refs,
                    const PatternPack& pack, const Tagger& tagger, int threads,
                    const std::function<void(const RelationInstance&)>& sink) {
  std::map<UttRef, const Utterance*> by_ref;
  for (const auto& u : corpus.utterances) {
    by_ref[{u.case_id, u.index}] = &u;
  }
  auto resolve = [&](const UttRef& ref) -> const Utterance& {
    auto it = by_ref.find(ref);
    if (it == by_ref.end()) {
      throw InternalError("pool references unknown utterance " + ref.case_id + "#" +
                          std::to_string(ref.index));
    }
    return *it->second;
  };

  if (threads <= 1 || refs.size() < 2) {
    for (const auto& ref : refs) {
      for (const auto& inst : extract_utterance(resolve(ref), pack, tagger)) {
        sink(inst);
      }
    }
    return;
  }

  // Parallel per utterance; results are buffered per ref and streamed in
  // order, so thread count never changes the output.
  std::vector<std::vector<RelationInstance>> results(refs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= refs.size()) break;
      results[i] = extract_utterance(resolve(refs[i]), pack, tagger);
    }
  };
  std::vector<std::thread> workers;
  int n = std::min<int>(threads, static_cast<int>(refs.size()));
  workers.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) workers.emplace_back(worker);
  for (auto& w : workers) w.join();
  for (const auto& bucket : results) {
    for (const auto& inst : bucket) sink(inst);
  }
}

std::vector<RelationInstance> extract_corpus(const Corpus& corpus,
                                             const Partition& partition,
                                             std::optional<Kappa> pool,
                                             const PatternPack& pack,
                                             const Tagger& tagger, int threads) {
  std::vector<UttRef> refs;
  if (pool) {
    refs = partition.pool(*pool);
  } else {
    refs.reserve(corpus.utterances.size());
    for (const auto& u : corpus.utterances) refs.push_back({u.case_id, u.index});
  }
  std::vector<RelationInstance> out;
  extract_stream(corpus, refs, pack, tagger, threads,
                 [&](const RelationInstance& inst) { out.push_back(inst); });
  return out;
}

}  // namespace courtrel
