from pydantic import BaseModel, Field


class ErrorResponse(BaseModel):
    """Schema for the single-line diagnostic written on failure."""

    detail: str = Field(..., description="Error detail message")
    kind: str = Field(..., description="Exception class name")
    exit_code: int = Field(..., description="Process exit code", ge=1)
