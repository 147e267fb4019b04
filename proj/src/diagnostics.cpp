#include "surveyscope/diagnostics.hpp"

#include <json.hpp>

namespace surveyscope {

void DiagnosticSink::push(Diagnostic d) {
    if (mirror_ != nullptr) {
        nlohmann::json line{
            {"level", d.level}, {"code", d.code}, {"detail", d.detail}};
        (*mirror_) << line.dump() << '\n';
    }
    entries_.push_back(std::move(d));
}

}  // namespace surveyscope
