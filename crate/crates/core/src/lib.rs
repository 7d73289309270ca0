//! Preparation of Arabic social-network corpora for sentiment analysis,
//! dialect-aware stopword list generation, and Naive Bayes / decision tree
//! experiments over unigram and bigram presence features.

pub mod classify;
pub mod cli;
pub mod corpus_prep;
pub mod evaluate;
pub mod resource;
pub mod stopgen;
pub mod textkit;
