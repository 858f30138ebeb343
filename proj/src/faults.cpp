#include "esk/faults.hpp"

namespace esk {

namespace {
Fault g_fault = Fault::None;
}

void set_fault(Fault f) { g_fault = f; }
Fault current_fault() { return g_fault; }

}  // namespace esk
