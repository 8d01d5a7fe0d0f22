#pragma once

// A proof session: the theorem, the current proof state, the step log and an
// unlimited undo/redo history. Sessions persist as XML holding the theorem
// and the step log; loading replays the log.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "setproof/history.hpp"
#include "setproof/kernel.hpp"

namespace setproof {

struct Theorem {
  std::vector<Formula> givens;
  std::vector<std::string> labels;  // empty means H1, H2, ...
  Formula goal;
};

class Session {
 public:
  /// Throws InvalidTheorem.
  explicit Session(Theorem theorem);

  const Theorem& theorem() const { return theorem_; }
  const ProofState& state() const { return history_.current().state; }
  /// Steps leading from the theorem to the current state.
  const std::vector<StepDescriptor>& log() const { return history_.current().log; }
  /// Undone steps, next redo first.
  std::vector<StepDescriptor> redo_log() const;
  /// Bumped by every successful apply, undo and redo.
  std::uint64_t version() const { return version_; }

  /// Strong guarantee: kernel errors leave the session untouched.
  void apply(const StepDescriptor& step);
  void undo();
  void redo();
  bool can_undo() const { return history_.can_undo(); }
  bool can_redo() const { return history_.can_redo(); }
  std::size_t undo_depth() const { return history_.undo_depth(); }
  std::size_t redo_depth() const { return history_.redo_depth(); }

  std::string outline(OutlineStyle style) const { return render_outline(state(), style); }

 private:
  friend Session load_session(std::string_view xml);

  struct Snapshot {
    ProofState state;
    std::vector<StepDescriptor> log;
  };
  Theorem theorem_;
  History<Snapshot> history_;
  std::vector<StepDescriptor> redo_log_;
  std::uint64_t version_ = 0;
};

/// Canonical XML: the same session always serializes to the same bytes.
std::string save_session(const Session& s);

/// Throws MalformedXml (position = line), SchemaViolation, InvalidTheorem or
/// ReplayFailure (position = 1-based step index).
Session load_session(std::string_view xml);

/// Standalone HTML document with the html outline.
std::string export_html(const Session& s);

}  // namespace setproof
