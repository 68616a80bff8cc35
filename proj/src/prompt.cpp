#include "clonebench/prompt.hpp"

#include <cctype>
#include <set>

#include "clonebench/error.hpp"
#include "clonebench/text.hpp"

namespace clonebench {

namespace {

constexpr std::string_view kCode1 = "{code1}";
constexpr std::string_view kCode2 = "{code2}";

std::size_t occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

PromptTemplate PromptTemplate::prompt1() {
  return PromptTemplate(Id::Prompt1,
                        "{code1}\n{code2}\nAre code 1 and code 2 code clones? answer with yes or no and no explanation.");
}

PromptTemplate PromptTemplate::prompt2() {
  return PromptTemplate(Id::Prompt2,
                        "{code1},\n{code2},\nDo code 1 and code 2 solve identical problems with the same inputs and "
                        "outputs? answer with yes or no and no explanation.");
}

PromptTemplate PromptTemplate::custom(std::string body) {
  if (occurrences(body, kCode1) != 1 || occurrences(body, kCode2) != 1) {
    throw TemplateError("template must contain {code1} and {code2} exactly once each");
  }
  if (body.find(kCode1) > body.find(kCode2)) throw TemplateError("{code1} must precede {code2} in the template");
  return PromptTemplate(Id::Custom, std::move(body));
}

PromptTemplate PromptTemplate::by_name(std::string_view name) {
  const std::string lower = to_lower_ascii(name);
  if (lower == "prompt1") return prompt1();
  if (lower == "prompt2") return prompt2();
  throw TemplateError("unknown template '" + std::string(name) + "' (expected prompt1 or prompt2)");
}

std::string PromptTemplate::name() const {
  switch (id_) {
    case Id::Prompt1:
      return "prompt1";
    case Id::Prompt2:
      return "prompt2";
    case Id::Custom:
      break;
  }
  return "custom";
}

RenderedPrompt render_prompt(const ClonePair& pair, const PromptTemplate& prompt) {
  const std::string_view body = prompt.body();
  const std::size_t p1 = body.find(kCode1);
  const std::size_t p2 = body.find(kCode2);
  RenderedPrompt out;
  out.template_name = prompt.name();
  out.pair_id = pair.pair_id;
  out.text.reserve(body.size() + pair.code1.source.size() + pair.code2.source.size());
  out.text.append(body.substr(0, p1));
  out.text.append(pair.code1.source);
  out.text.append(body.substr(p1 + kCode1.size(), p2 - p1 - kCode1.size()));
  out.text.append(pair.code2.source);
  out.text.append(body.substr(p2 + kCode2.size()));
  return out;
}

namespace {

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (const char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::optional<int> label_for(const std::string& word) {
  if (word == "yes") return 1;
  if (word == "no") return 0;
  return std::nullopt;
}

}  // namespace

Verdict parse_verdict(std::string_view response, VerdictMode mode) {
  Verdict v;
  v.raw = std::string(response);

  std::string_view text = trim(response);
  while (!text.empty() && !std::isalnum(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  std::size_t end = 0;
  while (end < text.size() && std::isalpha(static_cast<unsigned char>(text[end]))) ++end;
  if (const auto label = label_for(to_lower_ascii(text.substr(0, end)))) {
    v.label = *label;
    return v;
  }

  if (mode == VerdictMode::Fallback) {
    std::set<int> found;
    for (const auto& w : words(response)) {
      if (const auto label = label_for(w)) found.insert(*label);
    }
    if (found.size() == 1) {
      v.label = *found.begin();
      return v;
    }
  }
  throw AmbiguousResponse(std::string(response));
}

}  // namespace clonebench
