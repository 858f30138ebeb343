#pragma once

namespace esk {

/// Switchable faults for harness self-tests: difftest must be able to
/// catch each of these within a bounded number of seeds.
enum class Fault {
  None,
  ParDeltaDrop,    // behavioral parallel keeps a dead derivative
  SeqCanFlagSwap,  // Can's sequence case picks the wrong flag for q
};

void set_fault(Fault f);
Fault current_fault();

}  // namespace esk
