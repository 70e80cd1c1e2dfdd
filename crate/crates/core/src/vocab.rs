//! Absolute IRIs of the terms the validator reasons about.

macro_rules! terms {
    ($ns:literal; $($name:ident = $local:literal),* $(,)?) => {
        $(pub const $name: &str = concat!($ns, $local);)*
    };
}

pub mod cr {
    terms! { "http://mlcommons.org/croissant/";
        TASK = "Task",
        TASK_PROBLEM = "TaskProblem",
        TASK_SOLUTION = "TaskSolution",
        EVALUATION_TASK = "EvaluationTask",
        EVALUATION_RESULT = "EvaluationResult",
        INPUT_SPEC = "InputSpec",
        OUTPUT_SPEC = "OutputSpec",
        IMPLEMENTATION_SPEC = "ImplementationSpec",
        EXECUTION_SPEC = "ExecutionSpec",
        EVALUATION_SPEC = "EvaluationSpec",
        EXECUTION_INFO = "ExecutionInfo",
        EXECUTION_CONFIG = "ExecutionConfig",
        EXECUTION_TRACE = "ExecutionTrace",
        DATASET = "Dataset",
        RECORD_SET = "RecordSet",
        FIELD = "Field",

        INPUT = "input",
        OUTPUT = "output",
        IMPLEMENTATION = "implementation",
        EXECUTION = "execution",
        EVALUATION = "evaluation",
        SUB_TASK = "subTask",
        EVALUATION_RESULTS = "evaluationResults",
        EVALUATED_SOLUTION = "evaluatedSolution",
        METRIC = "metric",
        EXPECTED_METRIC = "expectedMetric",
        VALUE = "value",
        SCHEMA = "schema",
        FIELD_PROP = "field",
        DATA_TYPE = "dataType",
        REPEATED = "repeated",
        VALUE_PATTERN = "valuePattern",
        HYPERPARAMETER = "hyperparameter",
    }
}

pub mod sc {
    terms! { "https://schema.org/";
        DATASET = "Dataset",
        SOFTWARE_APPLICATION = "SoftwareApplication",
        SOFTWARE_SOURCE_CODE = "SoftwareSourceCode",
        CREATIVE_WORK = "CreativeWork",

        NAME = "name",
        DESCRIPTION = "description",
        IS_BASED_ON = "isBasedOn",
        VALUE_PATTERN = "valuePattern",
    }
}

pub mod xsd {
    terms! { "http://www.w3.org/2001/XMLSchema#";
        STRING = "string",
        FLOAT = "float",
        DOUBLE = "double",
        DECIMAL = "decimal",
        INTEGER = "integer",
        INT = "int",
        LONG = "long",
        BOOLEAN = "boolean",
    }
}

/// Properties that hold at most one meaningful value; differing values under
/// one `@id` are merge conflicts.
pub const SCALAR_PROPERTIES: &[&str] = &[
    sc::NAME,
    sc::DESCRIPTION,
    cr::DATA_TYPE,
    cr::METRIC,
    cr::VALUE,
    cr::REPEATED,
    sc::VALUE_PATTERN,
    cr::VALUE_PATTERN,
];

/// Properties whose plain string values are IRIs (`"xsd:string"`).
pub const IRI_VALUED_PROPERTIES: &[&str] = &[cr::DATA_TYPE];
