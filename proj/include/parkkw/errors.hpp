#pragma once

#include <stdexcept>
#include <string>

namespace parkkw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// html-ingest
struct FetchError : Error { using Error::Error; };
struct EmptyBody : Error { using Error::Error; };
struct DecodeError : Error { using Error::Error; };
struct Undetectable : Error { using Error::Error; };

// text-pipeline
struct UnsupportedLanguage : Error { using Error::Error; };

// bm25f-ranker
struct InvalidParams : Error { using Error::Error; };

// linrel-bandit
struct NumericalFailure : Error { using Error::Error; };
struct InvalidHorizon : Error { using Error::Error; };
struct HorizonExhausted : Error { using Error::Error; };
struct RewardOutOfRange : Error { using Error::Error; };

// agreement-metrics
struct DegenerateMarginals : Error { using Error::Error; };
struct NotEnoughOverlap : Error { using Error::Error; };
struct UnequalRaterCounts : Error { using Error::Error; };

// judge-service
struct IterationAlreadyOpen : Error { using Error::Error; };
struct NoOpenIteration : Error { using Error::Error; };
struct AssessorFlagged : Error { using Error::Error; };
struct InvalidScore : Error { using Error::Error; };
struct UnknownTask : Error { using Error::Error; };
struct DuplicateJudgment : Error { using Error::Error; };
struct TaskClosed : Error { using Error::Error; };
struct UnknownIteration : Error { using Error::Error; };
struct UnknownDomain : Error { using Error::Error; };

}  // namespace parkkw
