// Copyright 2026 The absagen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "absagen/corpus_io.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "absagen/error.h"
#include "absagen/text.h"

namespace absagen {

namespace fs = std::filesystem;
using nlohmann::json;

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "semeval-xml" || name == "xml") return DatasetFormat::kSemevalXml;
  if (name == "jsonl") return DatasetFormat::kJsonl;
  throw ConfigError("unknown dataset format '" + std::string(name) + "'");
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file(const fs::path &path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error writing " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

namespace {

std::vector<std::string> split_lines(const std::string &content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::vector<Sentence> load_unlabeled_corpus(const fs::path &path,
                                            const std::string &domain) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (!is_valid_utf8(lines[i])) throw DecodeError(path.string(), line_no);
    std::string text = trim(lines[i]);
    if (text.empty()) continue;
    out.push_back(Sentence{std::to_string(line_no), std::move(text), domain});
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON encoding

json judgment_to_json(const Judgment &judgment) {
  json j;
  j["domain_relevant"] = judgment.domain_relevant;
  j["sentiment_relevant"] = judgment.sentiment_relevant;
  if (judgment.scores) {
    j["scores"] = {{"syntactic", judgment.scores->syntactic},
                   {"lexical", judgment.scores->lexical},
                   {"realism", judgment.scores->realism},
                   {"overall", judgment.scores->overall}};
  } else {
    j["scores"] = nullptr;
  }
  return j;
}

Judgment judgment_from_json(const json &j) {
  Judgment out;
  out.domain_relevant = j.at("domain_relevant").get<bool>();
  out.sentiment_relevant = j.at("sentiment_relevant").get<bool>();
  if (j.contains("scores") && !j["scores"].is_null()) {
    const json &s = j["scores"];
    out.scores = QualityScores::from_axes(s.at("syntactic").get<int>(),
                                          s.at("lexical").get<int>(),
                                          s.at("realism").get<int>());
    if (s.contains("overall") && s["overall"].get<int>() != out.scores->overall) {
      throw ParseError("judgment overall does not equal rounded mean");
    }
  }
  return out;
}

json sample_to_json(const LabeledSample &sample) {
  json annotations = json::array();
  for (const auto &a : sample.annotations) {
    json ja = {{"term", a.term}, {"polarity", polarity_code(a.polarity)}};
    if (a.span) ja["span"] = {a.span->start, a.span->end};
    annotations.push_back(std::move(ja));
  }
  json j = {{"id", sample.sentence.id},
            {"text", sample.sentence.text},
            {"domain", sample.sentence.domain},
            {"annotations", std::move(annotations)}};
  if (const auto *g = std::get_if<GeneratedOrigin>(&sample.provenance)) {
    json p = {{"type", "generated"}, {"round", g->round}};
    p["judgment"] = g->judgment ? judgment_to_json(*g->judgment) : json(nullptr);
    j["provenance"] = std::move(p);
  } else {
    j["provenance"] = "gold";
  }
  return j;
}

LabeledSample sample_from_json(const json &j) {
  LabeledSample s;
  s.sentence.id = j.value("id", std::string());
  s.sentence.text = j.at("text").get<std::string>();
  s.sentence.domain = j.value("domain", std::string());
  for (const json &ja : j.at("annotations")) {
    AspectAnnotation a;
    a.term = ja.at("term").get<std::string>();
    a.polarity = polarity_from_code(ja.at("polarity").get<int>());
    if (ja.contains("span") && !ja["span"].is_null()) {
      const json &sp = ja["span"];
      if (!sp.is_array() || sp.size() != 2) throw ParseError("span must be [start, end]");
      a.span = CharSpan{sp[0].get<std::size_t>(), sp[1].get<std::size_t>()};
    }
    s.annotations.push_back(std::move(a));
  }
  if (j.contains("provenance") && j["provenance"].is_object()) {
    const json &p = j["provenance"];
    if (p.value("type", std::string()) != "generated") {
      throw ParseError("unknown provenance type");
    }
    GeneratedOrigin g;
    g.round = p.at("round").get<int>();
    if (p.contains("judgment") && !p["judgment"].is_null()) {
      g.judgment = judgment_from_json(p["judgment"]);
    }
    s.provenance = g;
  } else if (j.contains("provenance") && j["provenance"] != "gold") {
    throw ParseError("unknown provenance");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Gold loading

namespace {

struct RawAnnotation {
  std::string term;
  std::string polarity;  // as written in the source
  std::optional<CharSpan> span;
};

// Applies conflict removal and validation; returns nullopt when the sentence
// contributes no sample.
std::optional<LabeledSample> finish_sample(Sentence sentence,
                                           const std::vector<RawAnnotation> &raw) {
  std::vector<AspectAnnotation> annotations;
  std::map<std::string, Polarity> seen;
  std::set<std::tuple<std::string, std::size_t, std::size_t, int>> exact;
  for (const auto &r : raw) {
    if (to_lower(r.polarity) == "conflict") continue;
    AspectAnnotation a;
    a.term = r.term;
    a.polarity = polarity_from_name(r.polarity);
    a.span = r.span;
    const std::string key = normalize_text(a.term);
    auto [it, inserted] = seen.emplace(key, a.polarity);
    if (!inserted && it->second != a.polarity) return std::nullopt;
    // Opinions repeated across categories describe one instance.
    const auto sig = std::make_tuple(key, a.span ? a.span->start : 0,
                                     a.span ? a.span->end : 0,
                                     polarity_code(a.polarity));
    if (!exact.insert(sig).second) continue;
    annotations.push_back(std::move(a));
  }
  if (annotations.empty()) return std::nullopt;
  LabeledSample s{std::move(sentence), std::move(annotations), GoldOrigin{}};
  validate_sample(s);
  return s;
}

namespace pt = boost::property_tree;

std::optional<CharSpan> read_span(const pt::ptree &attrs,
                                  const std::string &where) {
  auto from = attrs.get_optional<std::string>("from");
  auto to = attrs.get_optional<std::string>("to");
  if (!from || !to) return std::nullopt;
  try {
    return CharSpan{std::stoul(*from), std::stoul(*to)};
  } catch (const std::exception &) {
    throw ParseError(where + ": bad from/to attribute");
  }
}

void collect_sentences(const pt::ptree &node, const std::string &domain,
                       const std::string &path,
                       std::vector<LabeledSample> &out) {
  for (const auto &[name, child] : node) {
    if (name != "sentence") {
      if (name != "<xmlattr>" && name != "<xmlcomment>") {
        collect_sentences(child, domain, path, out);
      }
      continue;
    }
    const std::string id = child.get<std::string>("<xmlattr>.id", "");
    const std::string where = path + ": sentence '" + id + "'";
    auto text = child.get_optional<std::string>("text");
    if (!text) throw ParseError(where + ": missing <text>");
    std::string sentence_domain =
        child.get<std::string>("<xmlattr>.domain", domain);
    std::vector<RawAnnotation> raw;
    if (auto terms = child.get_child_optional("aspectTerms")) {
      for (const auto &[tname, term] : *terms) {
        if (tname != "aspectTerm") continue;
        auto t = term.get_optional<std::string>("<xmlattr>.term");
        auto p = term.get_optional<std::string>("<xmlattr>.polarity");
        if (!t || !p) throw ParseError(where + ": aspectTerm needs term and polarity");
        raw.push_back({*t, *p, read_span(term.get_child("<xmlattr>"), where)});
      }
    }
    if (auto opinions = child.get_child_optional("Opinions")) {
      for (const auto &[oname, op] : *opinions) {
        if (oname != "Opinion") continue;
        auto t = op.get_optional<std::string>("<xmlattr>.target");
        auto p = op.get_optional<std::string>("<xmlattr>.polarity");
        if (!t || !p) throw ParseError(where + ": Opinion needs target and polarity");
        if (*t == "NULL") continue;
        raw.push_back({*t, *p, read_span(op.get_child("<xmlattr>"), where)});
      }
    }
    try {
      auto sample = finish_sample(Sentence{id, *text, sentence_domain}, raw);
      if (sample) out.push_back(std::move(*sample));
    } catch (const ParseError &e) {
      throw ParseError(where + ": " + e.what());
    }
  }
}

std::vector<LabeledSample> load_semeval_xml(const fs::path &path,
                                            const std::string &domain) {
  std::istringstream in(read_file(path));
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error &e) {
    throw ParseError(path.string() + ":" + std::to_string(e.line()) + ": " +
                     e.message());
  }
  std::vector<LabeledSample> out;
  collect_sentences(tree, domain, path.string(), out);
  return out;
}

std::vector<LabeledSample> load_jsonl(const fs::path &path) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (trim(lines[i]).empty()) continue;
    if (!is_valid_utf8(lines[i])) {
      throw DecodeError(path.string(), static_cast<int>(i) + 1);
    }
    LabeledSample parsed;
    try {
      parsed = sample_from_json(json::parse(lines[i]));
    } catch (const json::exception &e) {
      throw ParseError(where + ": " + e.what());
    } catch (const ParseError &e) {
      throw ParseError(where + ": " + e.what());
    }
    std::vector<RawAnnotation> raw;
    for (const auto &a : parsed.annotations) {
      raw.push_back({a.term, std::string(polarity_name(a.polarity)), a.span});
    }
    auto sample = finish_sample(parsed.sentence, raw);
    if (!sample) continue;
    sample->provenance = parsed.provenance;
    out.push_back(std::move(*sample));
  }
  return out;
}

}  // namespace

std::vector<LabeledSample> load_gold_dataset(const fs::path &path,
                                             DatasetFormat format,
                                             const std::string &domain) {
  switch (format) {
    case DatasetFormat::kSemevalXml: return load_semeval_xml(path, domain);
    case DatasetFormat::kJsonl: return load_jsonl(path);
  }
  throw ConfigError("unknown dataset format");
}

PolarityCounts dataset_stats(std::span<const LabeledSample> samples) {
  PolarityCounts counts;
  for (const auto &s : samples) {
    for (const auto &a : s.annotations) ++counts[a.polarity];
  }
  return counts;
}

DatasetStats dataset_stats(std::span<const LabeledSample> train,
                           std::span<const LabeledSample> test) {
  return DatasetStats{dataset_stats(train), dataset_stats(test)};
}

std::vector<LabeledSample> deduplicate(std::span<const LabeledSample> samples) {
  std::set<std::pair<std::string, std::vector<std::pair<std::string, int>>>>
      seen;
  std::vector<LabeledSample> out;
  for (const auto &s : samples) {
    std::vector<std::pair<std::string, int>> bag;
    for (const auto &a : s.annotations) {
      bag.emplace_back(normalize_text(a.term), polarity_code(a.polarity));
    }
    std::sort(bag.begin(), bag.end());
    if (seen.emplace(normalize_text(s.sentence.text), std::move(bag)).second) {
      out.push_back(s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string render_xml(std::span<const LabeledSample> samples) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<sentences>\n";
  for (const auto &s : samples) {
    out += "  <sentence id=\"" + xml_escape(s.sentence.id) + "\"";
    if (!s.sentence.domain.empty()) {
      out += " domain=\"" + xml_escape(s.sentence.domain) + "\"";
    }
    out += ">\n    <text>" + xml_escape(s.sentence.text) + "</text>\n";
    out += "    <aspectTerms>\n";
    for (const auto &a : s.annotations) {
      out += "      <aspectTerm term=\"" + xml_escape(a.term) +
             "\" polarity=\"" + std::string(polarity_name(a.polarity)) + "\"";
      if (a.span) {
        out += " from=\"" + std::to_string(a.span->start) + "\" to=\"" +
               std::to_string(a.span->end) + "\"";
      }
      out += "/>\n";
    }
    out += "    </aspectTerms>\n  </sentence>\n";
  }
  out += "</sentences>\n";
  return out;
}

}  // namespace

std::string render_dataset(std::span<const LabeledSample> samples,
                           DatasetFormat format) {
  if (format == DatasetFormat::kSemevalXml) return render_xml(samples);
  std::string out;
  for (const auto &s : samples) {
    out += sample_to_json(s).dump();
    out += '\n';
  }
  return out;
}

void emit_dataset(std::span<const LabeledSample> samples, const fs::path &path,
                  DatasetFormat format) {
  write_file(path, render_dataset(samples, format));
}

}  // namespace absagen
