// Copyright 2026 The stratsat Authors
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

#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stratsat {

/// The four calls a synthesis session makes to its proposal oracle. Every
/// response is plain text that the host parses and validates again; a
/// provider signals an unusable call by throwing ProviderFailure.
class ProposalProvider {
 public:
  virtual ~ProposalProvider() = default;

  /// A `(strategy ...)` form.
  virtual std::string propose_strategy(const std::string &digest) = 0;
  /// `(tag <rule> <tag>)` forms, one per rule.
  virtual std::string propose_tags(const std::vector<std::string> &rules) = 0;
  /// `(pref <pattern> prune <pattern>)` forms.
  virtual std::string propose_hints(const std::string &phase_context) = 0;
  /// One action form drawn from `legal`.
  virtual std::string choose_action(const std::string &state_digest, const std::vector<std::string> &legal) = 0;
};

enum class ProviderCall { ChooseAction, ProposeStrategy, ProposeHints, ProposeTags };
std::string_view to_string(ProviderCall c);

/// Canned responses keyed by call type, consumed in order. The script is a
/// sequence of `(choose-action <form>)`, `(propose-strategy <form>)`,
/// `(propose-hints <form>*)` and `(propose-tags <form>*)` entries; a string
/// in place of the forms is returned verbatim. An exhausted queue throws
/// ProviderFailure.
class ScriptedProvider : public ProposalProvider {
 public:
  static ScriptedProvider parse(std::string_view script);

  std::string propose_strategy(const std::string &digest) override;
  std::string propose_tags(const std::vector<std::string> &rules) override;
  std::string propose_hints(const std::string &phase_context) override;
  std::string choose_action(const std::string &state_digest, const std::vector<std::string> &legal) override;

  [[nodiscard]] std::size_t remaining(ProviderCall c) const;

 private:
  std::string next(ProviderCall c);

  std::map<ProviderCall, std::deque<std::string>> queues_;
};

/// Response check for one call type: empty when the text is acceptable,
/// otherwise a diagnostic sent back with the repair request.
using ResponseCheck = std::function<std::string(ProviderCall, std::string_view)>;

/// Grammar-level checks for each call type (no vocabulary validation).
std::string check_response(ProviderCall call, std::string_view text);

struct HttpProviderConfig {
  std::string endpoint;  // http://host:port/path
  std::string model;
  std::string key_env;   // environment variable holding the API key
  std::chrono::seconds timeout{30};
};

/// POSTs a plain-text prompt and reads a plain-text reply. A reply failing
/// `check_response` gets one repair request; transport errors, non-200
/// replies and a failed repair throw ProviderFailure.
class HttpProvider : public ProposalProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config, ResponseCheck check = check_response);

  std::string propose_strategy(const std::string &digest) override;
  std::string propose_tags(const std::vector<std::string> &rules) override;
  std::string propose_hints(const std::string &phase_context) override;
  std::string choose_action(const std::string &state_digest, const std::vector<std::string> &legal) override;

 private:
  std::string call(ProviderCall c, const std::string &prompt);
  std::string post(const std::string &body);

  HttpProviderConfig config_;
  ResponseCheck check_;
  std::string scheme_host_;
  std::string path_;
};

}  // namespace stratsat
