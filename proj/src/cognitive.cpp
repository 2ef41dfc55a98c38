// SPDX-License-Identifier: Apache-2.0
#include "corgi/cognitive.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace corgi {
namespace {

using P = CognitiveProcess;
using L = CognitiveLoad;

constexpr std::string_view kRecognizing =
    "locate knowledge in long-term memory that is consistent with presented material (e.g., Recognize the "
    "dates of important events in U.S. history)";
constexpr std::string_view kRecalling =
    "retrieve relevant knowledge from long-term memory (e.g., Recall the dates of important events in U.S. "
    "history)";
constexpr std::string_view kInterpreting =
    "change from one form of representation (e.g., numerical) to another (e.g., verbal) (e.g., Paraphrase "
    "important speeches and documents)";
constexpr std::string_view kExemplifying =
    "find a specific example or illustration of a concept or principle (e.g., Give examples of various "
    "artistic painting styles)";
constexpr std::string_view kClassifying =
    "determine that something belongs to a category (e.g., concept or principle) (e.g., Classify observed or "
    "described cases of mental disorders)";
constexpr std::string_view kSummarizing =
    "abstract a general theme or major point(s) (e.g., Write a short summary of the events portrayed on a "
    "videotape)";
constexpr std::string_view kInferring =
    "draw a logical conclusion from presented information (e.g., In learning a foreign language, infer "
    "grammatical principles from examples)";
constexpr std::string_view kComparing =
    "detect correspondences between two ideas, objects, and the like (e.g., Compare historical events to "
    "contemporary situations)";
constexpr std::string_view kExplaining =
    "construct a cause-and-effect model of a system (e.g., Explain the causes of important 18th-century "
    "events in France)";
constexpr std::string_view kExecuting =
    "apply a procedure to a familiar task (e.g., Divide one whole number by another whole number, both with "
    "multiple digits)";
constexpr std::string_view kUsing =
    "apply a procedure to an unfamiliar task (e.g., Use Newton's Second Law in situations in which it is "
    "appropriate)";

constexpr std::array<CognitiveTemplate, kTemplateCount> kTemplates{{
    {1, P::remembering, "recognizing", L::easy, kRecognizing, "verification",
     "a verification task, where some information is given and one must choose whether or not it is correct"},
    {2, P::remembering, "recognizing", L::easy, kRecognizing, "matching",
     "a matching task, where two lists are presented and one must choose how each item in one list "
     "corresponds to an item in the other list. But not MCQ"},
    {3, P::remembering, "recalling", L::easy, kRecalling, "constructed response",
     "a constructed response question where one is not given any hints or related information (such as "
     "\"What is a meter?\")"},
    {4, P::remembering, "recalling", L::easy, kRecalling, "fill-in-the-blank",
     "a fill-in-the-blank where several hints are given (such as \"In the metric system a meter is a measure "
     "of ________.\")"},
    {5, P::understanding, "interpreting", L::medium, kInterpreting, "constructed response",
     "a constructed response question where information is presented in one form and one is asked to "
     "construct the same information in a different form (such as \"Write an equation that corresponds to "
     "the following statement using T for total cost and P for number of pounds. The total cost of mailing "
     "a package is $2.00 for the first pound plus $1.50 for each additional pound.\")"},
    {6, P::understanding, "exemplifying", L::medium, kExemplifying, "constructed response",
     "a constructed response question where one must create an example (such as \"Locate an inorganic "
     "compound and tell why it is inorganic\")"},
    {7, P::understanding, "classifying", L::medium, kClassifying, "constructed response",
     "a constructed response question where one is given an instance and must produce its related concept "
     "or principle from a list"},
    {8, P::understanding, "classifying", L::medium, kClassifying, "sorted response",
     "a sorted response question where one is given a set of instances and must determine which ones belong "
     "in a specified category and which ones do not, or must place each instance into one of multiple "
     "categories"},
    {9, P::understanding, "summarizing", L::medium, kSummarizing, "constructed response",
     "a constructed response question involving either themes or summaries. Generally speaking, themes are "
     "more abstract than summaries. For example, in a constructed response task, the student may be asked "
     "to read an untitled passage on the California Gold Rush and then write an appropriate title."},
    {10, P::understanding, "inferring", L::medium, kInferring, "completion",
     "a completion task where one is given a series of items and must determine what will come next, as in "
     "the number series example above (such as describing the relationship as an equation involving x and "
     "y for situations in which if x is 1, then y is 0; if x is 2, then y is 3; and if x is 3, then y is "
     "8)."},
    {11, P::understanding, "inferring", L::medium, kInferring, "analogy",
     "an analogy task where one is given an analogy of the form A is to B as C is to D such as \"nation\" is "
     "to \"president\" as \"state\" is to _______. In the example the student's task is to produce or "
     "select a term that fits in the blank and completes the analogy (such as \"governor\")."},
    {12, P::understanding, "inferring", L::medium, kInferring, "oddity",
     "an oddity task where one is given three or more items and must determine which does not belong (such "
     "as three physics problems, two involving one principle and another involving a different principle). "
     "question should not be in MCQ form"},
    {13, P::understanding, "comparing", L::medium, kComparing, "mapping",
     "a mapping task where one must show how each part of one object, idea, problem, or situation "
     "corresponds to (or maps onto) each part of another (such as asking to detail how the battery, wire, "
     "and resistor in an electrical circuit are like the pump, pipes, and pipe constructions in a water "
     "flow system, respectively.)"},
    {14, P::understanding, "explaining", L::medium, kExplaining, "reasoning",
     "a reasoning task where one is asked to offer a reason for a given event (such as \"Why does air enter "
     "a bicycle tire pump when you pull up on the handle?\")"},
    {15, P::understanding, "explaining", L::medium, kExplaining, "troubleshooting",
     "a troubleshooting task where one is asked to diagnose what could have gone wrong in a malfunctioning "
     "system (such as \"Suppose you pull up and press down on the handle of a bicycle tire pump several "
     "times but no air comes out. What's wrong?\")"},
    {16, P::understanding, "explaining", L::medium, kExplaining, "redesigning",
     "a redesigning task where one is asked to change the system to accomplish some goal (such as \"How "
     "could you improve a bicycle tire pump so that it would be more efficient?\")"},
    {17, P::understanding, "explaining", L::medium, kExplaining, "predicting",
     "a predicting task one is asked how a change in one part of a system will effect a change in another "
     "part of the system (such as \"What would happen if you increased the diameter of the cylinder in a "
     "bicycle tire pump?\")"},
    {18, P::applying, "executing", L::hard, kExecuting, "execution",
     "an execution task where one is given a familiar task that can be performed using a well-known "
     "procedure (such as \"Solve for x: x^2 + 2x - 3 = 0 using the technique of completing the square.\")"},
    {19, P::applying, "using", L::hard, kUsing, "implementation",
     "an implementation task where one is given an unfamiliar problem that must be solved. Thus, begin with "
     "specification of the problem. Then, one is asked to determine the procedure needed to solve the "
     "problem, solve the problem using the selected procedure (making modifications as necessary), or "
     "usually both."},
}};

constexpr std::array<std::string_view, 9> kEasyMessages{
    "",
    "You are a helpful assistant, who always provide explanation.",
    "You are an AI assistant. Provide a detailed answer so user don’t need to search outside to "
    "understand the answer.",
    "You are a smart AI assistant that follows instruction extremely well. Help as much as you can.",
    "You are an AI assistant. User will you give you a task. Your goal is to complete the task as faithfully "
    "as you can. While performing the task think step-by-step and justify your steps.",
    "Explain how you used the definition to come up with the correct answer.",
    "User will you give you a task with some instruction. Your job is follow the instructions as faithfully "
    "as you can. While answering think step-by-step and justify your answer.",
    "You are a factual AI assistant that helps people find information.",
    "You are an AI assistant that helps people find information. Provide a detailed answer so user don’t "
    "need to search outside to understand the answer.",
};

constexpr std::array<std::string_view, 6> kHarderMessages{
    "",
    "You are a teacher. Given a task, you explain in simple steps what the task is asking, any guidelines it "
    "provides and how to use those guidelines to find the answer.",
    "User will you give you a task with some instruction. Your job is follow the instructions as faithfully "
    "as you can. While answering think step-by-step and justify your answer.",
    "You are a factual AI assistant. User will you give you a task. Your goal is to complete the task as "
    "faithfully as you can. While performing the task think step-by-step and justify your steps.",
    "You should describe the task and explain your answer.",
    "You are a factually correct AI assistant. Generate concise answers with clear step-by-step reasoning.",
};

}  // namespace

std::span<const CognitiveTemplate> cognitive_templates() { return kTemplates; }

const CognitiveTemplate& cognitive_template(int index) {
  if (index < 1 || index > kTemplateCount) {
    throw std::out_of_range("cognitive index out of range 1..19: " + std::to_string(index));
  }
  return kTemplates[static_cast<std::size_t>(index - 1)];
}

CognitiveLoad cognitive_load_of(int index) { return cognitive_template(index).load; }

int load_tier(CognitiveLoad load) { return static_cast<int>(load); }

std::span<const std::string_view> system_messages_for(CognitiveLoad load) {
  if (load == CognitiveLoad::easy) return kEasyMessages;
  return kHarderMessages;
}

}  // namespace corgi
