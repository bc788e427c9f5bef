#pragma once

#include <functional>

namespace biot_mortar {

/// Worker cap: BIOT_MORTAR_THREADS if set to a positive integer, else the hardware concurrency.
int worker_count();

/// Runs body(0..n-1), spreading indices over up to worker_count() threads. Each index must
/// write only to its own outputs. The first exception thrown by any index is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace biot_mortar
