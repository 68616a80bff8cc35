#pragma once

#include <string>
#include <string_view>

#include "clonebench/detector.hpp"
#include "clonebench/sampler.hpp"

namespace clonebench {

/// Natural-language instruction wrapped around a code pair. The body holds
/// the placeholders `{code1}` and `{code2}`, each exactly once, in that order.
class PromptTemplate {
 public:
  enum class Id { Prompt1, Prompt2, Custom };

  /// Direct question: are the two snippets code clones?
  static PromptTemplate prompt1();
  /// Asks whether both snippets solve the same problem with the same inputs
  /// and outputs; the better-performing template and the default.
  static PromptTemplate prompt2();
  /// Throws TemplateError unless both placeholders occur exactly once and
  /// `{code1}` precedes `{code2}`.
  static PromptTemplate custom(std::string body);
  /// Looks up "prompt1" or "prompt2"; throws TemplateError otherwise.
  static PromptTemplate by_name(std::string_view name);

  Id id() const { return id_; }
  const std::string& body() const { return body_; }
  /// "prompt1", "prompt2" or "custom".
  std::string name() const;

 private:
  PromptTemplate(Id id, std::string body) : id_(id), body_(std::move(body)) {}
  Id id_;
  std::string body_;
};

struct RenderedPrompt {
  std::string text;
  std::string template_name;
  long long pair_id = 0;
};

/// Substitutes both sources verbatim in a single pass; placeholder-like text
/// inside a source is never expanded.
RenderedPrompt render_prompt(const ClonePair& pair, const PromptTemplate& prompt);

enum class VerdictMode {
  /// Only the leading word counts.
  Strict,
  /// Falls back to scanning the whole reply for exactly one of yes/no.
  Fallback,
};

/// Maps a yes/no reply to a label (yes = 1, no = 0), case-insensitively and
/// ignoring leading/trailing whitespace and punctuation. Throws
/// AmbiguousResponse when the reply cannot be mapped under `mode`.
Verdict parse_verdict(std::string_view response, VerdictMode mode = VerdictMode::Strict);

}  // namespace clonebench
